"""Seeded, platform-stable Gaussian streams.

Every scenario draws from a Philox4x64-10 counter-based generator. A 64-bit
scenario seed and a small sub-stream index together form the 128-bit Philox
key::

    key = (substream << 64) | seed

with the counter starting at zero. Sub-stream 0 feeds observation noise and
sub-stream 1 feeds random-walk drift innovations, so switching the drift model
never perturbs the noise realization.

Standard normal variates are produced by inverse-CDF transform of the raw
64-bit outputs::

    u = ((raw >> 11) + 0.5) / 2**53      # strictly inside (0, 1)
    z = Phi^{-1}(u)

which avoids the rejection sampling of numpy's ziggurat and therefore consumes
exactly one raw draw per variate.
"""

from __future__ import annotations

import numpy as np
from scipy.special import ndtri

from .errors import ConfigurationError

NOISE_STREAM = 0
DRIFT_STREAM = 1

_SEED_MAX = 2**64 - 1
_INV_2_53 = 2.0**-53


def check_seed(seed) -> int:
    if isinstance(seed, bool) or not isinstance(seed, (int, np.integer)):
        raise ConfigurationError(f"seed must be an integer, got {seed!r}")
    seed = int(seed)
    if not 0 <= seed <= _SEED_MAX:
        raise ConfigurationError(f"seed must fit in 64 unsigned bits, got {seed}")
    return seed


class GaussianStream:
    """Standard-normal draws from one Philox sub-stream.

    Parameters
    ----------
    seed : int
        Unsigned 64-bit scenario seed.
    substream : int
        Sub-stream index (``NOISE_STREAM`` or ``DRIFT_STREAM``).
    """

    def __init__(self, seed: int, substream: int):
        self.seed = check_seed(seed)
        if not 0 <= substream <= _SEED_MAX:
            raise ConfigurationError(f"invalid sub-stream index {substream}")
        self.substream = int(substream)
        self._bitgen = np.random.Philox(key=(self.substream << 64) | self.seed)

    def uniforms(self, n: int) -> np.ndarray:
        raw = self._bitgen.random_raw(n)
        return ((raw >> np.uint64(11)).astype(np.float64) + 0.5) * _INV_2_53

    def normals(self, n: int) -> np.ndarray:
        return ndtri(self.uniforms(n))


def substream(seed: int, index: int) -> GaussianStream:
    return GaussianStream(seed, index)

# %% [markdown]
# # Trend test and cumulative estimate on an external CSV
#
# Any time-stamped measurement of a quantity expected to stay constant can
# be checked the same way: a Kendall trend test over time bins, and the
# cumulative estimate that looks ever more certain. Here we fabricate a small
# "survey" with a slow zeropoint creep and write it to CSV first.

# %%
import csv
import tempfile
from pathlib import Path

import numpy as np

from drifttrap import blocked_trend, cumulative_estimates, ingest_csv
from drifttrap.harness import values_only

rng = np.random.default_rng(0)
years = np.sort(rng.uniform(2000, 2010, 3000))
color = 0.45 + 0.004 * (years - 2000) + rng.normal(0, 0.05, years.size)

path = Path(tempfile.mkdtemp()) / "survey.csv"
with open(path, "w", newline="") as fh:
    w = csv.writer(fh)
    w.writerow(["year", "g_r"])
    w.writerows(zip(years.round(4), color.round(5)))

# %%
pairs = ingest_csv(path, "g_r", time_column="year")
values = values_only(pairs)
print(blocked_trend(values, n_blocks=10))

cum = cumulative_estimates(values)
for e in cum[9::500]:
    print(f"n={e.n:5d}  mean={e.mean:.4f}  se={e.se:.4f}")

# %% [markdown]
# The same check from the command line:
#
#     drifttrap trend --input survey.csv --value-col g_r --time-col year --blocks 10

# %% [markdown]
# # Stable, confident, and wrong
#
# A stationary Gaussian model is fed observations whose mean creeps upward by
# 0.002 per step. Nothing in the raw data looks unusual, the posterior
# contracts smoothly, and the estimate converges to the wrong place.

# %%
import matplotlib.pyplot as plt
import numpy as np

from drifttrap import DriftSpec, ScenarioConfig, prop1_limit, residual_stats, run_scenario

config = ScenarioConfig(theta_star=0.0, sigma=1.0, n=5000, drift=DriftSpec.linear(0.002), seed=1)
trace = run_scenario(config)
t, y, b = trace.column("t"), trace.column("y"), trace.column("b_true")

# %% [markdown]
# The observations: noise dominates every single step.

# %%
fig, ax = plt.subplots()
ax.plot(t, y, ".", ms=1, alpha=0.4)
ax.plot(t, b, lw=2, label="hidden bias")
ax.legend()

# %% [markdown]
# Posterior mean and its +-2 sd band. The band shrinks like 1/sqrt(n) while
# the centre walks away from the true value 0.

# %%
mean, sd = trace.column("post_mean"), np.sqrt(trace.column("post_var"))
fig, ax = plt.subplots()
ax.plot(t, mean)
ax.fill_between(t, mean - 2 * sd, mean + 2 * sd, alpha=0.3)
ax.axhline(0, color="k", ls="--")

# %% [markdown]
# The estimate lands on theta* plus the time-averaged bias, alpha*(n+1)/2.

# %%
print("final posterior mean:", trace.rows[-1].post_mean)
print("time-averaged limit :", prop1_limit(b, config.theta_star))
print("final posterior sd  :", sd[-1])

# %% [markdown]
# Residuals against the final estimate have zero mean and a variance that
# does not look alarming for real data of unknown noise level.

# %%
print(residual_stats(y, trace.rows[-1].post_mean))
plt.show()

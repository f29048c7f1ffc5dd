# %% [markdown]
# # More data, more error: drift versus the no-drift control
#
# The same estimator run on 50 seeds with and without drift. Without drift
# the error falls like 1/sqrt(n); with linear drift it grows linearly after a
# short transient. Random-walk drift gives a noisier version of the same trap.

# %%
import matplotlib.pyplot as plt

from drifttrap import DriftSpec, ScenarioConfig, replicate

scenarios = {
    "no drift": DriftSpec.none(),
    "linear (alpha=0.002)": DriftSpec.linear(0.002),
    "random walk (sigma_rw=0.01)": DriftSpec.random_walk(0.01),
}

fig, ax = plt.subplots()
for label, drift in scenarios.items():
    table = replicate(ScenarioConfig(drift=drift, seed=0), n_seeds=50)
    ax.errorbar(table["n"], table["abs_error_mean"], yerr=table["abs_error_sd"], marker="o", label=label)
    print(label)
    print(table[["n", "abs_error_mean", "abs_error_sd"]].to_string(index=False))
ax.set_xscale("log")
ax.set_yscale("log")
ax.set_xlabel("observations")
ax.set_ylabel("mean |posterior mean - theta*|")
ax.legend()
plt.show()

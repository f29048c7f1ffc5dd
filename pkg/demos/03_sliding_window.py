# %% [markdown]
# # Forgetting does not help
#
# A 200-observation sliding window tracks the *drifting* mean, so its error
# keeps growing too: at t = 5000 it sits near alpha*(t - 99.5) = 9.801.

# %%
import matplotlib.pyplot as plt
import numpy as np

from drifttrap import DriftSpec, ScenarioConfig, run_scenario

finals = []
for seed in range(30):
    tr = run_scenario(ScenarioConfig(drift=DriftSpec.linear(0.002), window=200, seed=seed))
    finals.append(tr.rows[-1].window_est)
print(f"mean window estimate at t=5000 over 30 seeds: {np.mean(finals):.3f} (expected 9.801)")

fig, ax = plt.subplots()
ax.plot(tr.column("t"), tr.column("window_est"), label="window mean (W=200)")
ax.plot(tr.column("t"), tr.column("post_mean"), label="full posterior mean")
ax.axhline(0, color="k", ls="--", label="true value")
ax.legend()
plt.show()

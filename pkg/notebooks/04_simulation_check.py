# %% [markdown]
# # Checking the analytic model by simulation
#
# The simulator books patients into a single-server queue, rejects requests
# beyond the window, and marks each booking show or no-show. A no-show still
# holds its slot. Long runs should agree with the analytic occupancy and
# reward to within a few standard errors.

# %%
import numpy as np

from noshow_window import (EconomicParams, QueueSpec, ShowupModel, SimConfig, distribution,
                           net_reward, simulate)

for law, lam, K in [("deterministic", 19.9, 20), ("exponential", 19.9, 180)]:
    spec = QueueSpec(lam, 20, K, law)
    m, e = ShowupModel.kopach(0.4), EconomicParams(1.5, 0.5)
    sim = simulate(SimConfig(spec, m, e, horizon=2e5, seed=7))
    dist = distribution(spec)
    z = (sim.probs - dist.probs) / np.maximum(sim.probs_se, 1e-300)
    want = net_reward(dist, e, m).total
    print(f"{law} K={K}: max |z| over states {np.max(np.abs(z[sim.probs_se > 0])):.2f}, "
          f"reward {sim.reward:.4f} +- {sim.reward_se:.4f} vs {want:.4f}, "
          f"rejected {sim.rejection_fraction:.4f} vs Pi_K {dist.blocking:.4f}")

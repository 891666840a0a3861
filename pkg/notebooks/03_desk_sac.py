# %% [markdown]
# # Desk-scale SAC
#
# Two users, 20 slots, a 2x2 array. Train for a few hundred episodes and
# compare against the scripted baselines on the evaluation seeds.
# Set EPISODES lower for a quick look (the full run takes a few minutes).

# %%
import os

import numpy as np

from uavisac import harness
from uavisac.config import desk_scenario
from uavisac.environment import UavIsacEnv
from uavisac.learner import SacParams, train

EPISODES = int(os.environ.get("EPISODES", 300))
cfg = desk_scenario()

# %%
agent, returns = train(lambda: UavIsacEnv(cfg), SacParams(), EPISODES)
for i in range(0, EPISODES, 50):
    print(f"episodes {i:3d}-{i + 49:3d}: mean return {np.mean(returns[i:i + 50]):7.2f}")

# %%
seeds = tuple(range(100, 200))
env = UavIsacEnv(cfg)
sac = [harness.run_episode(env, agent, s, "sac").mean_aoi for s in seeds]
for name in ("kfrand", "sags", "random"):
    rows = harness.monte_carlo(cfg, name, seeds)
    print(f"{name:7s} mean AoI {np.mean([r.mean_aoi for r in rows]):.3f}")
print(f"sac     mean AoI {np.mean(sac):.3f}")
agent.save("desk_agent.json")

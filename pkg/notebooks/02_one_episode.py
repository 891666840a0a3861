# %% [markdown]
# # One episode, slot by slot
#
# Follow the KF-RAND baseline through a seeded episode: where the UAV is
# relative to the target, whether the echo cleared the gate, and how the
# ages move.

# %%
import numpy as np

from uavisac.baselines import KfRandPolicy, SagsPolicy
from uavisac.config import ScenarioConfig
from uavisac.environment import POLICY_STREAM, UavIsacEnv, episode_rng

cfg = ScenarioConfig()
env = UavIsacEnv(cfg)
policy = KfRandPolicy(cfg)
seed = 100

# %%
state = env.reset(seed)
rng = episode_rng(seed, POLICY_STREAM)
print("slot  uav-target[m]  kf err[m]  SNR[dB]  gate  decoded  ages")
done = False
while not done:
    state, reward, done = env.step(policy(state, rng))
    rec = env.last
    gap = np.linalg.norm(env.uav_xy - rec.target_pos)
    err = np.linalg.norm(env.kf_state.position - rec.target_pos)
    snr_db = 10 * np.log10(max(rec.snr, 1e-30))
    if env.slot % 5 == 0 or env.slot == 1:
        print(f"{env.slot:4d}  {gap:13.1f}  {err:9.2f}  {snr_db:7.1f}  {rec.sensing_ok!s:5}"
              f"  {rec.decoded.sum():7d}  {env.aoi.ages}")

# %% [markdown]
# SAGS on the same seed: it chases the stalest user and mostly loses the
# target, so the generation slot stalls and every age climbs together.

# %%
state = env.reset(seed)
sags = SagsPolicy(cfg)
total, sensed = 0.0, 0
done = False
while not done:
    state, reward, done = env.step(sags(state))
    total += reward
    sensed += env.last.sensing_ok
print(f"SAGS return {total:.1f}, sensing successes {sensed}/{cfg.horizon}")

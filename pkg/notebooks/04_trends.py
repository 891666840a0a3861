# %% [markdown]
# # Parameter sweeps for the scripted baselines
#
# Mean AoI against the SINR threshold, array size and user count, plus
# the sensing-accuracy sweep with its SNR and SINR. 100 seeds per point;
# expect several minutes on one core. The CSVs land in ./trends/.

# %%
import os

from uavisac import harness
from uavisac.config import ScenarioConfig

cfg = ScenarioConfig()
seeds = tuple(range(100, 200))
out = "trends"
os.makedirs(out, exist_ok=True)

plan = [
    ("gamma_th", (0.0, 5.0, 10.0, 15.0, 20.0), ("kfrand", "sags")),
    ("sigma_req", (0.1, 0.5, 1.0, 2.0, 4.0), ("sags",)),
    ("upa", (2, 3, 4, 5, 6), ("kfrand", "sags")),
    ("users", (3, 6, 9), ("kfrand", "sags")),
]

# %%
for axis, values, policies in plan:
    rows = harness.sweep(cfg, axis, values, policies, seeds)
    summary = harness.aggregate(rows)
    harness.write_text(os.path.join(out, f"{axis}.csv"), harness.summary_to_csv(summary))
    for s in summary:
        print(f"{axis:9s} {s['policy']:6s} {s['sweep_value']:5g}  AoI {s['mean_aoi']:6.3f}"
              f"  SNR {s['mean_snr_db']:6.2f} dB  SINR {s['mean_sinr_db']:6.2f} dB")

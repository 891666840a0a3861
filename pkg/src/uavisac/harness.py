"""Seeded Monte-Carlo evaluation, parameter sweeps and CSV output.

Rows are always emitted in (sweep value, policy, seed) order with a fixed
float format, so re-running a spec reproduces the same bytes regardless of
how many worker processes were used.
"""
import csv
import io
import logging
import math
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass

import numpy as np

from .baselines import POLICIES
from .constants import linear_to_db
from .environment import POLICY_STREAM, UavIsacEnv, episode_rng

log = logging.getLogger(__name__)

#: sweep axis name -> (config field(s), value grid used for the figures)
SWEEP_AXES = {
    "gamma_th": (("gamma_th_db",), (0.0, 5.0, 10.0, 15.0, 20.0)),
    "sigma_req": (("sigma_req",), (0.1, 0.5, 1.0, 2.0, 4.0)),
    "upa": (("mx", "my"), (2, 3, 4, 5, 6)),
    "users": (("num_users",), tuple(range(3, 16))),
}

FLOAT_FMT = "{:.9g}"


@dataclass(frozen=True)
class RunSpec:
    mode: str
    policies: tuple = ("sags",)
    config_path: str = None
    seeds: tuple = tuple(range(100, 200))
    episodes: int = 0
    out_dir: str = "."
    axis: str = None
    values: tuple = ()

    def __post_init__(self):
        if self.mode not in ("train", "eval", "sweep"):
            raise ValueError(f"unknown mode {self.mode!r}")
        if self.mode == "sweep":
            if self.axis not in SWEEP_AXES:
                raise ValueError(f"sweep axis must be one of {sorted(SWEEP_AXES)}")
            grid = SWEEP_AXES[self.axis][1]
            bad = [v for v in self.values if v not in grid]
            if bad or not self.values:
                raise ValueError(f"{self.axis} values must come from {grid}, got {self.values}")


@dataclass(frozen=True)
class MetricRow:
    """One evaluated episode. SNR and SINR are kept linear until emission."""

    seed: int
    episode: int
    policy: str
    sweep_value: float
    mean_aoi: float
    episode_return: float
    mean_snr: float
    mean_sinr: float

    @property
    def mean_snr_db(self):
        return float(linear_to_db(self.mean_snr))

    @property
    def mean_sinr_db(self):
        return float(linear_to_db(self.mean_sinr))


ROW_HEADER = ("seed", "episode", "policy", "sweep_value", "mean_aoi", "episode_return",
              "mean_snr_db", "mean_sinr_db")
SUMMARY_HEADER = ("policy", "sweep_value", "episodes", "mean_aoi", "stderr_aoi",
                  "mean_return", "stderr_return", "mean_snr_db", "mean_sinr_db")


def apply_sweep(config, axis, value):
    fields, _ = SWEEP_AXES[axis]
    cast = int if axis in ("upa", "users") else float
    changes = {f: cast(value) for f in fields}
    if axis == "users" and config.user_positions is not None:
        raise ValueError("cannot sweep the user count with a fixed user layout")
    return config.replace(**changes)


def make_policy(name, config):
    """Scripted policy by name, or a SAC agent loaded from a checkpoint path."""
    if name in POLICIES:
        return POLICIES[name](config)
    from .learner import SacAgent

    if not os.path.exists(name):
        raise FileNotFoundError(f"checkpoint not found: {name}")
    agent = SacAgent.load(name)
    if agent.state_dim != config.state_dim or agent.action_dim != config.action_dim:
        raise ValueError(f"checkpoint {name} was trained for state/action dims "
                         f"{agent.state_dim}/{agent.action_dim}, scenario needs "
                         f"{config.state_dim}/{config.action_dim}")
    return agent


def policy_label(name):
    return name if name in POLICIES else "sac"


def run_episode(env, policy, seed, label="policy", episode=0, sweep_value=float("nan")):
    """Full rollout of one seeded episode."""
    state = env.reset(seed)
    rng = episode_rng(seed, POLICY_STREAM)
    ages, snrs, sinrs = [], [], []
    total = 0.0
    done = False
    while not done:
        state, reward, done = env.step(policy(state, rng))
        total += reward
        ages.append(-reward)
        snrs.append(env.last.snr)
        sinrs.append(float(np.mean(env.last.sinr)))
    return MetricRow(seed=int(seed), episode=int(episode), policy=label,
                     sweep_value=float(sweep_value), mean_aoi=float(np.mean(ages)),
                     episode_return=total, mean_snr=float(np.mean(snrs)),
                     mean_sinr=float(np.mean(sinrs)))


def _run_chunk(args):
    config, policy_name, seeds, sweep_value = args
    env = UavIsacEnv(config)
    policy = make_policy(policy_name, config)
    label = policy_label(policy_name)
    return [run_episode(env, policy, s, label, i, sweep_value) for i, s in seeds]


def monte_carlo(config, policy_name, seeds, sweep_value=float("nan"), workers=1):
    """Evaluate one policy over a seed set; rows come back in seed order."""
    indexed = list(enumerate(seeds))
    make_policy(policy_name, config)  # fail early on a bad name or checkpoint
    if workers <= 1:
        rows = _run_chunk((config, policy_name, indexed, sweep_value))
    else:
        chunks = [indexed[i::workers] for i in range(workers)]
        with ProcessPoolExecutor(max_workers=workers) as pool:
            parts = pool.map(_run_chunk, [(config, policy_name, c, sweep_value) for c in chunks])
            rows = [r for part in parts for r in part]
    return sorted(rows, key=lambda r: r.seed)


def sweep(config, axis, values, policy_names, seeds, workers=1):
    rows = []
    for value in values:
        cfg = apply_sweep(config, axis, value)
        for name in policy_names:
            log.info("sweep %s=%s policy %s", axis, value, name)
            rows.extend(monte_carlo(cfg, name, seeds, float(value), workers))
    return rows


def _stderr(x):
    x = np.asarray(x, dtype=float)
    return float(x.std(ddof=1) / math.sqrt(len(x))) if len(x) > 1 else 0.0


def aggregate(rows):
    """Mean and standard error per (policy, sweep value), unweighted.

    SNR and SINR are averaged linearly before conversion to dB.
    """
    groups = {}
    for r in rows:
        # NaN never compares equal, so rows without a sweep value need a stable key
        key = None if math.isnan(r.sweep_value) else r.sweep_value
        groups.setdefault((r.policy, key), []).append(r)
    out = []
    for (policy, key), group in groups.items():
        value = float("nan") if key is None else key
        aoi = [r.mean_aoi for r in group]
        ret = [r.episode_return for r in group]
        out.append({
            "policy": policy,
            "sweep_value": value,
            "episodes": len(group),
            "mean_aoi": float(np.mean(aoi)),
            "stderr_aoi": _stderr(aoi),
            "mean_return": float(np.mean(ret)),
            "stderr_return": _stderr(ret),
            "mean_snr_db": float(linear_to_db(np.mean([r.mean_snr for r in group]))),
            "mean_sinr_db": float(linear_to_db(np.mean([r.mean_sinr for r in group]))),
        })
    return out


def _fmt(v):
    if isinstance(v, float):
        return FLOAT_FMT.format(v)
    return str(v)


def rows_to_csv(rows):
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(ROW_HEADER)
    for r in rows:
        writer.writerow([_fmt(v) for v in (r.seed, r.episode, r.policy, r.sweep_value,
                                            r.mean_aoi, r.episode_return, r.mean_snr_db,
                                            r.mean_sinr_db)])
    return buf.getvalue()


def summary_to_csv(summary):
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(SUMMARY_HEADER)
    for s in summary:
        writer.writerow([_fmt(s[k]) for k in SUMMARY_HEADER])
    return buf.getvalue()


def write_text(path, text):
    with open(path, "w", newline="") as fh:
        fh.write(text)


def parse_seeds(text):
    """``"100..199"`` (inclusive) or a comma-separated list."""
    text = text.strip()
    if ".." in text:
        lo, hi = text.split("..")
        lo, hi = int(lo), int(hi)
        if hi < lo:
            raise ValueError(f"empty seed range {text!r}")
        return tuple(range(lo, hi + 1))
    return tuple(int(s) for s in text.split(",") if s.strip())

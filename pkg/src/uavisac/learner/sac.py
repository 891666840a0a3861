"""Soft Actor-Critic on numpy.

Actor: squashed Gaussian, ``a = tanh(mu + sigma * noise)``. Twin critics
with slowly tracking target copies. The temperature is stored as its
logarithm so it stays positive.

The loss functions take the Gaussian noise as an argument instead of
drawing it, which makes them deterministic and lets the tests compare their
gradients against finite differences.
"""
import dataclasses
import json
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .features import Featurizer, Identity
from .nn import Adam, Mlp, soft_update

FORMAT_TAG = "uavisac-sac/1"
LOG_2PI = np.log(2.0 * np.pi)


@dataclass
class SacParams:
    gamma: float = 0.99
    lr_actor: float = 3e-4
    lr_critic: float = 3e-4
    lr_temp: float = 3e-4
    tau_soft: float = 0.01
    batch_size: int = 256
    update_interval: int = 1
    grad_repeat: int = 1
    target_entropy: float = None  # defaults to -action_dim
    init_temperature: float = 0.2
    buffer_capacity: int = 1_000_000
    hidden: tuple = (256, 256)
    log_std_min: float = -20.0
    log_std_max: float = 2.0
    squash_eps: float = 1e-6
    seed: int = 0

    def __post_init__(self):
        if not 0.0 < self.gamma < 1.0:
            raise ValueError("gamma must lie in (0, 1)")
        if not 0.0 < self.tau_soft <= 1.0:
            raise ValueError("soft-update coefficient must lie in (0, 1]")
        if self.batch_size < 1 or self.update_interval < 1 or self.grad_repeat < 1:
            raise ValueError("batch size, update interval and grad repeat must be >= 1")
        self.hidden = tuple(int(h) for h in self.hidden)


class PolicyOutput(NamedTuple):
    action: np.ndarray
    log_prob: np.ndarray
    cache: list
    mean: np.ndarray
    log_std: np.ndarray
    noise: np.ndarray
    unclipped: np.ndarray


def policy_forward(actor, obs, noise, params):
    """Squashed-Gaussian sample and its log-density for given noise."""
    out, cache = actor.forward(obs)
    d = out.shape[1] // 2
    mean, raw_log_std = out[:, :d], out[:, d:]
    log_std = np.clip(raw_log_std, params.log_std_min, params.log_std_max)
    unclipped = (raw_log_std > params.log_std_min) & (raw_log_std < params.log_std_max)
    action = np.tanh(mean + np.exp(log_std) * noise)
    gauss = -0.5 * noise**2 - log_std - 0.5 * LOG_2PI
    squash = np.log(1.0 - action**2 + params.squash_eps)
    log_prob = gauss.sum(axis=1) - squash.sum(axis=1)
    return PolicyOutput(action, log_prob, cache, mean, log_std, noise, unclipped)


def policy_backward(actor, pol, d_action, d_log_prob, params):
    """Parameter gradients of ``sum(d_action * a) + sum(d_log_prob * log_prob)``
    through the reparameterised sample."""
    a = pol.action
    one_minus = 1.0 - a**2
    # d/du of -log(1 - tanh(u)^2 + eps)
    squash_grad = 2.0 * a * one_minus / (one_minus + params.squash_eps)
    g_u = d_action * one_minus + d_log_prob[:, None] * squash_grad
    g_mean = g_u
    g_log_std = (g_u * np.exp(pol.log_std) * pol.noise - d_log_prob[:, None]) * pol.unclipped
    grads, _ = actor.backward(pol.cache, np.hstack([g_mean, g_log_std]))
    return grads


def q_value(critic, obs, action):
    out, cache = critic.forward(np.hstack([obs, action]))
    return out[:, 0], cache


def td_target(params, target_critics, actor, reward, next_obs, done, temperature, noise):
    """``r + gamma (1 - done) [min_j Qbar_j(s', a') - kappa log pi(a'|s')]``."""
    pol = policy_forward(actor, next_obs, noise, params)
    q1, _ = q_value(target_critics[0], next_obs, pol.action)
    q2, _ = q_value(target_critics[1], next_obs, pol.action)
    soft = np.minimum(q1, q2) - temperature * pol.log_prob
    return reward + params.gamma * (1.0 - done) * soft


def critic_loss(critics, obs, action, y):
    """``0.5 * sum_i mean((Q_i - y)^2)`` and the gradient for each critic."""
    n = len(y)
    loss = 0.0
    grads = []
    for critic in critics:
        q, cache = q_value(critic, obs, action)
        err = q - y
        loss += 0.5 * np.mean(err**2)
        g, _ = critic.backward(cache, (err / n)[:, None])
        grads.append(g)
    return loss, grads


def actor_loss(actor, critic, obs, noise, temperature, params):
    """``mean(kappa log pi(a|s) - Q_1(s, a))`` with ``a`` re-sampled.

    Returns the loss, actor gradients and the log-probabilities (which the
    temperature loss reuses as constants).
    """
    n = obs.shape[0]
    pol = policy_forward(actor, obs, noise, params)
    q, cache = q_value(critic, obs, pol.action)
    loss = float(np.mean(temperature * pol.log_prob - q))
    _, d_input = critic.backward(cache, np.full((n, 1), -1.0 / n))
    d_action = d_input[:, obs.shape[1]:]
    grads = policy_backward(actor, pol, d_action, np.full(n, temperature / n), params)
    return loss, grads, pol.log_prob


def temperature_loss(log_temperature, log_prob, target_entropy):
    """``mean(kappa (-log pi - H_tar))`` and its derivative in ``log kappa``."""
    kappa = np.exp(log_temperature)
    loss = float(np.mean(kappa * (-log_prob - target_entropy)))
    return loss, loss  # d/d(log k) of k*c equals k*c


def sac_losses(agent, batch, noise_next, noise_pi):
    """All three losses and their gradients for one mini-batch."""
    s, a, r, s2, done = batch
    obs, next_obs = agent.features(s), agent.features(s2)
    p = agent.params
    kappa = agent.temperature
    y = td_target(p, agent.target_critics, agent.actor, r, next_obs, done, kappa, noise_next)
    lq, gq = critic_loss(agent.critics, obs, a, y)
    lpi, gpi, logp = actor_loss(agent.actor, agent.critics[0], obs, noise_pi, kappa, p)
    lk, gk = temperature_loss(agent.log_temperature, logp, agent.target_entropy)
    return {"critic": (lq, gq), "actor": (lpi, gpi), "temperature": (lk, gk), "y": y}


class SacAgent:
    def __init__(self, state_dim, action_dim, params=None, featurizer=None):
        self.params = params or SacParams()
        self.state_dim = int(state_dim)
        self.action_dim = int(action_dim)
        self.features = featurizer or Identity(state_dim)
        self.rng = np.random.default_rng(self.params.seed)
        p = self.params
        obs_dim = self.features.dim
        self.actor = Mlp((obs_dim, *p.hidden, 2 * action_dim), self.rng)
        self.critics = [Mlp((obs_dim + action_dim, *p.hidden, 1), self.rng) for _ in range(2)]
        self.target_critics = [c.copy() for c in self.critics]
        self.log_temperature = float(np.log(p.init_temperature))
        self.target_entropy = (-float(action_dim) if p.target_entropy is None
                               else float(p.target_entropy))
        self.actor_opt = Adam(self.actor.params, lr=p.lr_actor)
        self.critic_opts = [Adam(c.params, lr=p.lr_critic) for c in self.critics]
        self.temp_opt = Adam([np.zeros(1)], lr=p.lr_temp)
        self.updates = 0

    @property
    def temperature(self):
        return float(np.exp(self.log_temperature))

    def act(self, state, deterministic=False):
        obs = self.features(state)
        if deterministic:
            out = self.actor(obs)
            return np.tanh(out[0, : self.action_dim])
        noise = self.rng.standard_normal((1, self.action_dim))
        return policy_forward(self.actor, obs, noise, self.params).action[0]

    def __call__(self, state, rng=None):
        """Deterministic policy interface used for evaluation."""
        return self.act(state, deterministic=True)

    def update(self, batch):
        """One gradient step on critics, actor and temperature."""
        n = len(batch[2])
        noise_next = self.rng.standard_normal((n, self.action_dim))
        noise_pi = self.rng.standard_normal((n, self.action_dim))
        s, a, r, s2, done = batch
        obs, next_obs = self.features(s), self.features(s2)
        p = self.params
        kappa = self.temperature

        y = td_target(p, self.target_critics, self.actor, r, next_obs, done, kappa, noise_next)
        lq, gq = critic_loss(self.critics, obs, a, y)
        for critic, opt, g in zip(self.critics, self.critic_opts, gq):
            opt.step(critic.params, g)

        lpi, gpi, logp = actor_loss(self.actor, self.critics[0], obs, noise_pi, kappa, p)
        self.actor_opt.step(self.actor.params, gpi)

        lk, gk = temperature_loss(self.log_temperature, logp, self.target_entropy)
        holder = [np.array([self.log_temperature])]
        self.temp_opt.step(holder, [np.array([gk])])
        self.log_temperature = float(holder[0][0])
        self.updates += 1
        return {"critic": lq, "actor": lpi, "temperature": lk, "kappa": kappa}

    def soft_update(self, tau=None):
        tau = self.params.tau_soft if tau is None else tau
        for t, c in zip(self.target_critics, self.critics):
            soft_update(t, c, tau)

    # checkpointing

    def to_dict(self):
        params = dataclasses.asdict(self.params)
        params["hidden"] = list(params["hidden"])
        nets = {"actor": self.actor, "critic1": self.critics[0], "critic2": self.critics[1],
                "target1": self.target_critics[0], "target2": self.target_critics[1]}
        return {
            "format": FORMAT_TAG,
            "state_dim": self.state_dim,
            "action_dim": self.action_dim,
            "params": params,
            "featurizer": self.features.to_dict(),
            "networks": {k: {"sizes": list(n.sizes), "flat": n.flat().tolist()}
                         for k, n in nets.items()},
            "optimizers": {"actor": self.actor_opt.state_dict(),
                           "critic1": self.critic_opts[0].state_dict(),
                           "critic2": self.critic_opts[1].state_dict(),
                           "temperature": self.temp_opt.state_dict()},
            "log_temperature": self.log_temperature,
            "target_entropy": self.target_entropy,
            "updates": self.updates,
            "rng_state": self.rng.bit_generator.state,
        }

    @classmethod
    def from_dict(cls, data):
        if data.get("format") != FORMAT_TAG:
            raise ValueError(f"unsupported checkpoint format {data.get('format')!r}")
        params = SacParams(**data["params"])
        feat = data["featurizer"]
        featurizer = Identity(feat["identity"]) if "identity" in feat else Featurizer.from_dict(feat)
        agent = cls(data["state_dim"], data["action_dim"], params, featurizer)
        nets = data["networks"]
        for name, net in (("actor", agent.actor), ("critic1", agent.critics[0]),
                          ("critic2", agent.critics[1]), ("target1", agent.target_critics[0]),
                          ("target2", agent.target_critics[1])):
            if tuple(nets[name]["sizes"]) != net.sizes:
                raise ValueError(f"{name}: layer sizes {nets[name]['sizes']} != {net.sizes}")
            net.set_flat(nets[name]["flat"])
        agent.actor_opt = Adam(agent.actor.params, lr=params.lr_actor)
        agent.critic_opts = [Adam(c.params, lr=params.lr_critic) for c in agent.critics]
        opts = data["optimizers"]
        agent.actor_opt.load_state_dict(opts["actor"])
        agent.critic_opts[0].load_state_dict(opts["critic1"])
        agent.critic_opts[1].load_state_dict(opts["critic2"])
        agent.temp_opt.load_state_dict(opts["temperature"])
        agent.log_temperature = float(data["log_temperature"])
        agent.target_entropy = float(data["target_entropy"])
        agent.updates = int(data["updates"])
        agent.rng.bit_generator.state = data["rng_state"]
        return agent

    def save(self, path):
        with open(path, "w") as fh:
            json.dump(self.to_dict(), fh)

    @classmethod
    def load(cls, path):
        try:
            with open(path) as fh:
                data = json.load(fh)
        except FileNotFoundError:
            raise FileNotFoundError(f"checkpoint not found: {path}") from None
        return cls.from_dict(data)

"""Central finite-difference checks of the SAC loss gradients."""
import numpy as np

from uavisac.learner import Mlp, SacParams, actor_loss, critic_loss, temperature_loss

STEP = 1e-6


def rel_error(a, b):
    a, b = np.ravel(a), np.ravel(b)
    den = max(np.linalg.norm(a), np.linalg.norm(b), 1e-12)
    return float(np.linalg.norm(a - b) / den)


def fd_params(net, loss_fn):
    """Central differences of ``loss_fn()`` over every parameter of ``net``."""
    out = []
    for p in net.params:
        g = np.zeros_like(p)
        it = np.nditer(p, flags=["multi_index"])
        for _ in it:
            i = it.multi_index
            old = p[i]
            p[i] = old + STEP
            up = loss_fn()
            p[i] = old - STEP
            down = loss_fn()
            p[i] = old
            g[i] = (up - down) / (2 * STEP)
        out.append(g)
    return np.concatenate([g.ravel() for g in out])


def flat(grads):
    return np.concatenate([np.ravel(g) for g in grads])


def check_draw(seed, width=4, obs_dim=3, act_dim=2, batch=6):
    """Relative errors (critic, actor, temperature) for one random draw."""
    rng = np.random.default_rng(seed)
    params = SacParams(hidden=(width, width))
    actor = Mlp((obs_dim, width, width, 2 * act_dim), rng)
    critics = [Mlp((obs_dim + act_dim, width, width, 1), rng) for _ in range(2)]
    obs = rng.standard_normal((batch, obs_dim))
    act = rng.uniform(-0.9, 0.9, (batch, act_dim))
    y = rng.standard_normal(batch)
    noise = rng.standard_normal((batch, act_dim))
    kappa = float(rng.uniform(0.05, 1.0))

    _, gq = critic_loss(critics, obs, act, y)
    crit = max(rel_error(flat(gq[j]), fd_params(critics[j],
                                                lambda: critic_loss(critics, obs, act, y)[0]))
               for j in range(2))

    _, gpi, logp = actor_loss(actor, critics[0], obs, noise, kappa, params)
    fd = fd_params(actor, lambda: actor_loss(actor, critics[0], obs, noise, kappa, params)[0])
    act_err = rel_error(flat(gpi), fd)

    log_t = float(np.log(kappa))
    h_tar = -float(act_dim)
    _, gk = temperature_loss(log_t, logp, h_tar)
    fdk = (temperature_loss(log_t + STEP, logp, h_tar)[0]
           - temperature_loss(log_t - STEP, logp, h_tar)[0]) / (2 * STEP)
    temp_err = rel_error(gk, fdk)
    return crit, act_err, temp_err

import logging

import numpy as np

from .features import Featurizer
from .replay import ReplayBuffer
from .sac import SacAgent, SacParams

log = logging.getLogger(__name__)


def make_agent(config, params=None):
    """Agent sized for a scenario, with the scenario's observation scaling."""
    return SacAgent(config.state_dim, config.action_dim, params or SacParams(),
                    Featurizer.from_config(config))


def train(env_factory, params=None, episodes=0, agent=None, base_seed=1000, callback=None):
    """Run SAC training episodes.

    Episode ``e`` resets the environment with seed ``base_seed + e``. Once
    the buffer holds a mini-batch, every ``update_interval`` environment
    steps perform ``grad_repeat`` gradient steps followed by one soft update
    of the target critics.

    Returns
    -------
    agent : SacAgent
    returns : list of float
        Undiscounted return of every training episode.
    """
    env = env_factory()
    params = params or (agent.params if agent else SacParams())
    if agent is None:
        agent = make_agent(env.config, params)
    buffer = ReplayBuffer(params.buffer_capacity, env.state_dim, env.action_dim,
                          np.random.default_rng([params.seed, 1]))
    returns = []
    steps = 0
    for e in range(episodes):
        state = env.reset(base_seed + e)
        total = 0.0
        done = False
        while not done:
            action = agent.act(state)
            next_state, reward, done = env.step(action)
            buffer.push(state, action, reward, next_state, done)
            total += reward
            state = next_state
            steps += 1
            if len(buffer) >= params.batch_size and steps % params.update_interval == 0:
                for _ in range(params.grad_repeat):
                    agent.update(buffer.sample(params.batch_size))
                agent.soft_update()
        returns.append(total)
        if callback is not None:
            callback(e, total, agent)
        if (e + 1) % 25 == 0:
            log.info("episode %d  mean return (last 25) %.3f  kappa %.4f", e + 1,
                     np.mean(returns[-25:]), agent.temperature)
    return agent, returns

from .features import Featurizer, Identity
from .nn import Adam, Mlp, soft_update
from .replay import ReplayBuffer
from .sac import (SacAgent, SacParams, actor_loss, critic_loss, policy_forward, sac_losses,
                  td_target, temperature_loss)
from .train import make_agent, train

__all__ = ["Adam", "Featurizer", "Identity", "Mlp", "ReplayBuffer", "SacAgent", "SacParams",
           "actor_loss", "critic_loss", "make_agent", "policy_forward", "sac_losses",
           "soft_update", "td_target", "temperature_loss", "train"]

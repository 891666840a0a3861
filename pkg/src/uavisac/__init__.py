"""UAV integrated sensing and communication simulator with a numpy SAC learner."""
from .config import ScenarioConfig, desk_scenario
from .environment import UavIsacEnv

__version__ = "0.1.0"

__all__ = ["ScenarioConfig", "UavIsacEnv", "desk_scenario"]

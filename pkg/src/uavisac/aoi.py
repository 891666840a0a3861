"""Age-of-Information bookkeeping.

Slots are 1-based. At slot 1 every age is 1 and the latest generation slot
is 1. From slot 2 on, a user that decodes resets its age to the time since
the *previous* slot's generation, ``n - g[n-1]``; afterwards ``g`` moves to
``n`` if this slot's sensing succeeded.
"""
from dataclasses import dataclass

import numpy as np


@dataclass(frozen=True)
class AoiState:
    generation_slot: int
    ages: tuple
    slot: int

    @classmethod
    def initial(cls, num_users):
        return cls(generation_slot=1, ages=(1,) * num_users, slot=1)


def step(state, sensing_ok, decode_ok):
    n = state.slot + 1
    decode_ok = np.asarray(decode_ok, dtype=bool)
    if decode_ok.shape != (len(state.ages),):
        raise ValueError(f"expected {len(state.ages)} decode flags, got {decode_ok.shape}")
    reset = n - state.generation_slot
    ages = tuple(reset if ok else age + 1 for age, ok in zip(state.ages, decode_ok))
    g = n if sensing_ok else state.generation_slot
    return AoiState(generation_slot=g, ages=ages, slot=n)


def average_age(state):
    return sum(state.ages) / len(state.ages)

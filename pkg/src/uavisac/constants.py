"""Physical constants and dB helpers shared by the link and radar models."""
import numpy as np

SPEED_OF_LIGHT = 2.99792458e8  # m/s
BOLTZMANN = 1.380649e-23  # J/K


def db_to_linear(db):
    return 10.0 ** (np.asarray(db, dtype=float) / 10.0)


def linear_to_db(x, floor=1e-30):
    return 10.0 * np.log10(np.maximum(x, floor))


def dbm_to_watts(dbm):
    return 10.0 ** ((np.asarray(dbm, dtype=float) - 30.0) / 10.0)

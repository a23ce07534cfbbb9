"""Random channel generators used by the verification suites."""

import math

import numpy as np

from .channel_model import CompoundChannel, canonicalize


def random_gain(rng, lo_db=-20.0, hi_db=20.0):
    """Complex gain with log-uniform power gain in ``[lo_db, hi_db]`` and uniform phase."""
    mag = 10.0 ** (rng.uniform(lo_db, hi_db) / 20.0)
    return complex(mag * np.exp(1j * rng.uniform(0.0, 2.0 * math.pi)))


def random_channel(rng, n_states=2, gain_db=(-20.0, 20.0), power_db=(0.0, 30.0)) -> CompoundChannel:
    """Canonical channel with ``n_states`` independent states per receiver."""
    rx1 = [(random_gain(rng, *gain_db), random_gain(rng, *gain_db)) for _ in range(n_states)]
    rx2 = [(random_gain(rng, *gain_db), random_gain(rng, *gain_db)) for _ in range(n_states)]
    p1 = 10.0 ** (rng.uniform(*power_db) / 10.0)
    p2 = 10.0 ** (rng.uniform(*power_db) / 10.0)
    return canonicalize(CompoundChannel(rx1, rx2, p1, p2))


def duplicate_state_channel(rng, gain_db=(-20.0, 20.0), power_db=(0.0, 30.0)) -> CompoundChannel:
    """Two-state channel whose states coincide: a noncompound channel in disguise."""
    base = random_channel(rng, 1, gain_db, power_db)
    return CompoundChannel(base.states_rx1 * 2, base.states_rx2 * 2, base.p1, base.p2)

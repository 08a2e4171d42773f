"""Shared helpers for the test suite."""

import numpy as np

from coinwalk import ArcState

SEED = 20260810


def make_rng(seed=SEED):
    return np.random.default_rng(seed)


def random_arc_state(rng, sites=8):
    r = rng.normal(size=sites) + 1j * rng.normal(size=sites)
    l = rng.normal(size=sites) + 1j * rng.normal(size=sites)
    s = ArcState(r, l)
    return s.scaled(1.0 / s.norm())


def random_disc_point(rng, max_modulus=0.95):
    radius = max_modulus * np.sqrt(rng.uniform())
    phase = rng.uniform(0.0, 2.0 * np.pi)
    return complex(radius * np.cos(phase), radius * np.sin(phase))

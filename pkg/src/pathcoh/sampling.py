"""Seeded Haar-random states, unitaries and scenarios.

All samplers take a numpy Generator (or anything `np.random.default_rng`
accepts) so substreams can be derived reproducibly with SeedSequence spawn
keys.
"""
from __future__ import annotations

import numpy as np

from .interferometer import ScenarioSpec


def _rng(seed) -> np.random.Generator:
    if isinstance(seed, np.random.Generator):
        return seed
    return np.random.default_rng(seed)


def haar_state(rng, dim: int) -> np.ndarray:
    """Haar-uniform unit vector: normalized complex standard normals."""
    g = _rng(rng)
    v = g.standard_normal(dim) + 1j * g.standard_normal(dim)
    return v / np.linalg.norm(v)


def haar_unitary(rng, dim: int) -> np.ndarray:
    """Haar-random unitary via QR of a complex Ginibre matrix (Mezzadri)."""
    g = _rng(rng)
    z = g.standard_normal((dim, dim)) + 1j * g.standard_normal((dim, dim))
    q, r = np.linalg.qr(z)
    d = np.diagonal(r)
    return q * (d / np.abs(d))


def sample_scenario(seed, n: int, d_b: int, d_d: int | None = None) -> ScenarioSpec:
    """Haar-random scenario: uniform pure AB state, independent detector states.

    d_d defaults to n so any overlap pattern of detector states is realizable.
    """
    if n < 2:
        raise ValueError(f"need at least two paths, got n={n}")
    d_d = n if d_d is None else d_d
    g = _rng(seed)
    amps = haar_state(g, n * d_b).reshape(n, d_b)
    phis = np.stack([haar_state(g, d_d) for _ in range(n)])
    return ScenarioSpec(amps, phis)


def subseed(seed: int, *key: int) -> np.random.Generator:
    """Substream generator for (seed, key...) — reproducible under parallelism."""
    return np.random.default_rng(np.random.SeedSequence(seed, spawn_key=key))

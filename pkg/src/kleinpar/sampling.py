"""Deterministic samplers shared by the verification engines.

Every sampler takes an explicit seed; repeated calls with the same seed
return bit-identical arrays.
"""

from __future__ import annotations

import numpy as np
from scipy.special import ndtri
from scipy.stats import qmc


def rng_for(seed: int, *stream: int) -> np.random.Generator:
    """Child generator for (seed, stream...) so strata stay independent."""
    return np.random.default_rng(np.random.SeedSequence([seed, *stream]))


def unit_vectors(n: int, dim: int, rng: np.random.Generator) -> np.ndarray:
    v = rng.standard_normal((n, dim))
    return v / np.linalg.norm(v, axis=1, keepdims=True)


def halton_sphere(n: int, dim: int, seed: int) -> np.ndarray:
    """Low-discrepancy points on the unit sphere S^(dim-1)."""
    h = qmc.Halton(d=dim, scramble=True, seed=seed)
    u = h.random(n)
    g = ndtri(np.clip(u, 1e-12, 1 - 1e-12))
    norms = np.linalg.norm(g, axis=1, keepdims=True)
    norms[norms == 0.0] = 1.0
    return g / norms


def sphere_grid(n_lat: int, n_lon: int) -> np.ndarray:
    """Equiangular grid on S^2, poles excluded, shape (n_lat*n_lon, 3)."""
    theta = (np.arange(n_lat) + 0.5) * np.pi / n_lat
    phi = np.arange(n_lon) * 2.0 * np.pi / n_lon
    T, P = np.meshgrid(theta, phi, indexing="ij")
    st = np.sin(T)
    pts = np.stack([st * np.cos(P), st * np.sin(P), np.cos(T)], axis=-1)
    return pts.reshape(-1, 3)


def fibonacci_sphere(n: int) -> np.ndarray:
    """Near-uniform n points on S^2 (includes near-polar points)."""
    i = np.arange(n) + 0.5
    z = 1.0 - 2.0 * i / n
    r = np.sqrt(np.maximum(0.0, 1.0 - z * z))
    phi = np.pi * (1.0 + np.sqrt(5.0)) * i
    return np.stack([r * np.cos(phi), r * np.sin(phi), z], axis=-1)

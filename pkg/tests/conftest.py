"""Shared helpers for building random problem instances."""

from __future__ import annotations

import numpy as np

from identangle import DensityMatrix, GramMatrix, TransformSpec, custom_spec


def random_row_normalized(rng: np.random.Generator, n: int = 3, m: int = 3) -> np.ndarray:
    """Complex Gaussian matrix with every row normalized to unit power."""
    t = rng.normal(size=(n, m)) + 1j * rng.normal(size=(n, m))
    return t / np.sqrt(np.sum(np.abs(t) ** 2, axis=1))[:, None]


def random_spec(rng: np.random.Generator, n: int = 3, m: int = 3) -> TransformSpec:
    """Random transformation with random spin assignments on every path."""
    t = random_row_normalized(rng, n, m)
    s = rng.integers(0, 2, size=(n, m))
    return custom_spec(t, s)


def random_gram(rng: np.random.Generator, n: int = 3) -> GramMatrix:
    """Random positive semidefinite Gram matrix with unit diagonal.

    Built as a normalized A A^dagger, which makes it an honest Gram matrix of
    n random vectors, so positivity and |entry| <= 1 hold by construction.
    """
    a = rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))
    g = a @ a.conj().T
    scale = 1.0 / np.sqrt(np.diag(g).real)
    return GramMatrix(g * np.outer(scale, scale))


def random_density(rng: np.random.Generator, dim: int = 8) -> DensityMatrix:
    """Random full-rank density matrix (normalized Wishart)."""
    a = rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim))
    rho = a @ a.conj().T
    return DensityMatrix(rho / np.trace(rho).real)

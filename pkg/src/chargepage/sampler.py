"""Reproducible Haar-random states inside a sector.

Sample ``k`` of master seed ``s`` is drawn from a Philox stream keyed by ``s``
whose counter starts at ``k << 192``, so every sample is a pure function of
``(s, k)`` no matter how samples are distributed over workers.
"""

from __future__ import annotations

import hashlib
from dataclasses import dataclass

import numpy as np

from .lattice import SparseState
from .sectors import SectorBasis, SectorEmptyError

SEED_MASK = (1 << 64) - 1


@dataclass(frozen=True)
class SamplerConfig:
    master_seed: int
    sample_index: int

    def __post_init__(self):
        if self.sample_index < 0:
            raise ValueError("sample_index must be >= 0")


def sample_rng(master_seed: int, sample_index: int) -> np.random.Generator:
    bitgen = np.random.Philox(key=master_seed & SEED_MASK,
                              counter=[0, 0, 0, sample_index])
    return np.random.Generator(bitgen)


def complex_normal(rng: np.random.Generator, size: int) -> np.ndarray:
    """i.i.d. standard complex normals (g1 + i g2) / sqrt(2)."""
    g = rng.standard_normal((2, size))
    return (g[0] + 1j * g[1]) / np.sqrt(2)


def sector_coefficients(dim: int, master_seed: int, sample_index: int) -> np.ndarray:
    """Unit-norm Haar coefficients over an orthonormal basis of size ``dim``."""
    c = complex_normal(sample_rng(master_seed, sample_index), dim)
    return c / np.linalg.norm(c)


def sample_dense(basis: SectorBasis, master_seed: int, indices) -> np.ndarray:
    """Dense (4^N x k) block of normalized samples for the given sample indices."""
    if basis.dim == 0:
        raise SectorEmptyError("cannot sample from an empty sector")
    coeffs = np.stack([sector_coefficients(basis.dim, master_seed, int(k)) for k in indices],
                      axis=1)
    block = basis.matrix @ coeffs
    return np.asarray(block)


def sample_state(basis: SectorBasis, cfg: SamplerConfig) -> SparseState:
    """Haar-random pure state in ``basis`` for one (seed, index) pair."""
    vec = sample_dense(basis, cfg.master_seed, [cfg.sample_index])[:, 0]
    return SparseState.from_dense(vec)


def derive_seed(master_seed: int, tag: str) -> int:
    """Independent 64-bit seed for a named stream (e.g. one per sector)."""
    digest = hashlib.sha256(f"{master_seed}:{tag}".encode()).digest()
    return int.from_bytes(digest[:8], "little")

"""Entanglement entropy of sampled states and Monte-Carlo Page curves."""

from __future__ import annotations

import math
import warnings
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np
import scipy.sparse as sp

from .lattice import LOCAL_DIM, SparseState, as_matrix, n_sites_of
from .sampler import sample_dense
from .sectors import SectorBasis, SectorEmptyError

ZERO_CUTOFF = 1e-14
NORM_TOL = 1e-8
MIN_SAMPLES = 100


def entropy_from_probs(p: np.ndarray) -> float:
    p = np.asarray(p, dtype=float)
    p = p[p > ZERO_CUTOFF]
    return float(-np.sum(p * np.log(p)))


def entanglement_entropy(state: SparseState | np.ndarray, n_a: int) -> float:
    """Von Neumann entropy (nats) of the first ``n_a`` sites, from Schmidt coefficients."""
    vec = state.to_dense() if isinstance(state, SparseState) else np.asarray(state, complex)
    n = n_sites_of(vec.size)
    if not 0 <= n_a <= n:
        raise ValueError(f"n_a={n_a} out of range 0..{n}")
    norm = np.linalg.norm(vec)
    if abs(norm - 1) > NORM_TOL:
        raise ValueError(f"state is not normalized (norm {norm:.12g})")
    if n_a in (0, n):
        return 0.0
    sv = np.linalg.svd(as_matrix(vec, n, n_a), compute_uv=False)
    return entropy_from_probs(sv ** 2)


def batch_entropies(block: np.ndarray, n_sites: int, n_a: int) -> np.ndarray:
    """Entropies of each column of a dense (4^N x k) block of normalized states."""
    k = block.shape[1]
    if n_a in (0, n_sites):
        return np.zeros(k)
    sv = np.linalg.svd(as_matrix(block, n_sites, n_a), compute_uv=False)
    p = sv ** 2
    with np.errstate(divide="ignore", invalid="ignore"):
        terms = np.where(p > ZERO_CUTOFF, -p * np.log(np.where(p > 0, p, 1.0)), 0.0)
    return terms.sum(axis=1)


def reduced_density_matrix(state: SparseState | np.ndarray, n_a: int) -> np.ndarray:
    vec = state.to_dense() if isinstance(state, SparseState) else np.asarray(state, complex)
    mat = as_matrix(vec, n_sites_of(vec.size), n_a)
    return mat @ mat.conj().T


def von_neumann_entropy(rho: np.ndarray) -> float:
    """-Tr(rho log rho) by diagonalization."""
    return entropy_from_probs(np.linalg.eigvalsh(rho))


@dataclass
class PageCurveEstimate:
    """Per-N_A mean entropy, standard error and sample count."""

    label: str
    n_sites: int
    seed: int
    records: dict[int, tuple[float, float, int]] = field(default_factory=dict)

    def mean(self, n_a: int) -> float:
        return self.records[n_a][0]

    def stderr(self, n_a: int) -> float:
        return self.records[n_a][1]

    def samples(self, n_a: int) -> int:
        return self.records[n_a][2]

    @property
    def n_a_values(self) -> list[int]:
        return sorted(self.records)

    def rows(self):
        for n_a in self.n_a_values:
            mean, err, count = self.records[n_a]
            yield {"N": self.n_sites, "N_A": n_a, "sector_label": self.label,
                   "mean_nats": mean, "stderr_nats": err, "samples": count,
                   "seed": self.seed}


def combined_stderr(*errors: float) -> float:
    return math.sqrt(sum(e * e for e in errors))


def sample_entropies(sector: SectorBasis, n_a_list: Sequence[int], samples: int, seed: int,
                     workers: int = 1, block: int | None = None) -> np.ndarray:
    """(samples x len(n_a_list)) matrix of per-sample entropies.

    Row k always comes from sample index k, so the result does not depend on
    ``workers`` or ``block``.
    """
    if sector.dim == 0:
        raise SectorEmptyError("cannot sample from an empty sector")
    n = sector.n_sites
    if block is None:
        block = max(1, min(256, (1 << 22) // sector.hilbert_dim))
    out = np.empty((samples, len(n_a_list)))

    def run(start: int) -> None:
        idx = range(start, min(start + block, samples))
        states = sample_dense(sector, seed, idx)
        for col, n_a in enumerate(n_a_list):
            out[start:start + len(idx), col] = batch_entropies(states, n, n_a)

    starts = range(0, samples, block)
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            list(pool.map(run, starts))
    else:
        for start in starts:
            run(start)
    return out


def page_curve(sector: SectorBasis, n_a_list: Sequence[int] | None = None,
               samples: int = 1000, seed: int = 0, workers: int = 1) -> PageCurveEstimate:
    """Monte-Carlo estimate of the mean entanglement entropy of Haar states in ``sector``."""
    n = sector.n_sites
    if n_a_list is None:
        n_a_list = list(range(n + 1))
    n_a_list = list(n_a_list)
    for n_a in n_a_list:
        if not 0 <= n_a <= n:
            raise ValueError(f"n_a={n_a} out of range 0..{n}")
    if samples < 1:
        raise ValueError("samples must be positive")
    if samples < MIN_SAMPLES:
        warnings.warn(f"only {samples} samples; standard errors will be unreliable",
                      stacklevel=2)
    ent = sample_entropies(sector, n_a_list, samples, seed, workers)
    est = PageCurveEstimate(sector.label.slug, n, seed)
    for col, n_a in enumerate(n_a_list):
        vals = ent[:, col]
        err = float(vals.std(ddof=1) / math.sqrt(samples)) if samples > 1 else float("nan")
        est.records[n_a] = (float(vals.mean()), err, samples)
    return est


def reduced_sector_state(sector: SectorBasis, n_a: int) -> np.ndarray:
    """Tr_B of the maximally mixed state on ``sector`` as a dense 4^N_A matrix."""
    if sector.dim == 0:
        raise SectorEmptyError("empty sector")
    if n_a > 6:
        raise ValueError("reduced state of more than 6 sites is too large to form densely")
    d_a = LOCAL_DIM ** n_a
    coo = sector.matrix.tocoo()
    rows = coo.row.astype(np.int64)
    # each (B index, basis vector) pair is one column of W; rho_A = W W^dagger / D
    w = sp.csr_matrix((coo.data, (rows % d_a, (rows // d_a) * sector.dim + coo.col)),
                      shape=(d_a, (sector.hilbert_dim // d_a) * sector.dim))
    rho = (w @ w.conj().T).toarray() / sector.dim
    return rho


def state_counting_entropy(sector: SectorBasis, n_a: int) -> float:
    """Entropy of the reduced maximally mixed sector state (the state-counting term)."""
    if n_a == 0:
        return 0.0
    return von_neumann_entropy(reduced_sector_state(sector, n_a))

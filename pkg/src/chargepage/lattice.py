"""Basis indexing and sparse kernels for a chain of two-qubit sites.

Bit layout (fixed for the whole package): site ``j`` owns the base-4 digit
``(index >> 2*j) & 3`` and that digit is ``2*a + b``, so the a-qubit sits at
bit ``2*j + 1`` and the b-qubit at bit ``2*j``.  Bit value 0 is spin up
(Z = +1).  With this layout ``kron(P_a, P_b)`` is the single-site matrix of
``P_a (x) P_b`` and site 0 is the least significant digit.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np
import scipy.sparse as sp

LOCAL_DIM = 4
MAX_SITES = 10
PRUNE = 1e-14

PAULI = {
    "I": np.eye(2, dtype=complex),
    "X": np.array([[0, 1], [1, 0]], dtype=complex),
    "Y": np.array([[0, -1j], [1j, 0]], dtype=complex),
    "Z": np.array([[1, 0], [0, -1]], dtype=complex),
}


@dataclass(frozen=True)
class LatticeShape:
    n_sites: int
    local_dim: int = LOCAL_DIM

    def __post_init__(self):
        if self.n_sites < 1 or self.n_sites > MAX_SITES:
            raise ValueError(f"n_sites must be in 1..{MAX_SITES}, got {self.n_sites}")
        if self.local_dim != LOCAL_DIM:
            raise ValueError("only two-qubit sites (local_dim=4) are supported")

    @property
    def dim(self) -> int:
        return self.local_dim ** self.n_sites


def qubit_bit(site: int, qubit: str) -> int:
    """Bit position of qubit ``'a'`` or ``'b'`` of ``site``."""
    if qubit == "a":
        return 2 * site + 1
    if qubit == "b":
        return 2 * site
    raise ValueError(f"qubit must be 'a' or 'b', got {qubit!r}")


def n_sites_of(dim: int) -> int:
    n = 0
    while LOCAL_DIM ** n < dim:
        n += 1
    if LOCAL_DIM ** n != dim:
        raise ValueError(f"dimension {dim} is not a power of 4")
    return n


@dataclass(frozen=True, eq=False)
class SparseState:
    """Complex amplitudes keyed by basis index, indices strictly increasing."""

    dim: int
    indices: np.ndarray = field(repr=False)
    amplitudes: np.ndarray = field(repr=False)

    def __post_init__(self):
        idx = np.asarray(self.indices, dtype=np.int64)
        amp = np.asarray(self.amplitudes, dtype=complex)
        if idx.shape != amp.shape or idx.ndim != 1:
            raise ValueError("indices and amplitudes must be 1-d arrays of equal length")
        if idx.size and (idx[0] < 0 or idx[-1] >= self.dim or np.any(np.diff(idx) <= 0)):
            raise ValueError("indices must be strictly increasing and within range")
        idx.setflags(write=False)
        amp.setflags(write=False)
        object.__setattr__(self, "indices", idx)
        object.__setattr__(self, "amplitudes", amp)

    @classmethod
    def from_entries(cls, dim: int, indices, amplitudes, prune: float = PRUNE) -> "SparseState":
        """Build from unsorted, possibly repeated entries (repeats are summed)."""
        idx = np.asarray(indices, dtype=np.int64)
        amp = np.asarray(amplitudes, dtype=complex)
        uniq, inv = np.unique(idx, return_inverse=True)
        summed = np.zeros(uniq.size, dtype=complex)
        np.add.at(summed, inv, amp)
        keep = np.abs(summed) > prune
        return cls(dim, uniq[keep], summed[keep])

    @classmethod
    def from_dense(cls, vec, prune: float = PRUNE) -> "SparseState":
        vec = np.asarray(vec, dtype=complex).ravel()
        nz = np.flatnonzero(np.abs(vec) > prune)
        return cls(vec.size, nz, vec[nz])

    @classmethod
    def basis(cls, dim: int, index: int) -> "SparseState":
        return cls(dim, np.array([index]), np.array([1.0 + 0j]))

    def to_dense(self) -> np.ndarray:
        out = np.zeros(self.dim, dtype=complex)
        out[self.indices] = self.amplitudes
        return out

    @property
    def nnz(self) -> int:
        return int(self.indices.size)

    def norm(self) -> float:
        return float(np.sqrt(np.sum(np.abs(self.amplitudes) ** 2)))

    def vdot(self, other: "SparseState") -> complex:
        """<self|other>."""
        common, i, j = np.intersect1d(self.indices, other.indices, assume_unique=True,
                                      return_indices=True)
        return complex(np.sum(np.conj(self.amplitudes[i]) * other.amplitudes[j]))

    def scaled(self, factor: complex) -> "SparseState":
        return SparseState.from_entries(self.dim, self.indices, self.amplitudes * factor)

    def allclose(self, other: "SparseState", atol: float = 1e-12) -> bool:
        if self.dim != other.dim:
            return False
        return bool(np.allclose(self.to_dense(), other.to_dense(), atol=atol, rtol=0))


class SparseOperator:
    """Sparse complex matrix acting on the 4^N lattice space (stored as CSR)."""

    def __init__(self, matrix, hermitian: bool = False):
        self.matrix = sp.csr_matrix(matrix, dtype=complex)
        if self.matrix.shape[0] != self.matrix.shape[1]:
            raise ValueError("operator must be square")
        self.hermitian = hermitian

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]

    def apply(self, state: SparseState) -> SparseState:
        col = sp.csc_matrix((state.amplitudes, state.indices, [0, state.nnz]),
                            shape=(state.dim, 1))
        out = (self.matrix @ col).tocoo()
        return SparseState.from_entries(self.dim, out.row, out.data)

    def is_hermitian(self, tol: float = 1e-12) -> bool:
        diff = self.matrix - self.matrix.conj().T
        return diff.nnz == 0 or float(np.max(np.abs(diff.data))) <= tol

    def toarray(self) -> np.ndarray:
        return self.matrix.toarray()

    def max_nnz_per_column(self) -> int:
        return int(np.max(np.diff(self.matrix.tocsc().indptr), initial=0))

    def __matmul__(self, other):
        if isinstance(other, SparseOperator):
            return SparseOperator(self.matrix @ other.matrix)
        if isinstance(other, SparseState):
            return self.apply(other)
        return self.matrix @ other

    def __add__(self, other: "SparseOperator") -> "SparseOperator":
        return SparseOperator(self.matrix + other.matrix, self.hermitian and other.hermitian)

    def __sub__(self, other: "SparseOperator") -> "SparseOperator":
        return SparseOperator(self.matrix - other.matrix, self.hermitian and other.hermitian)

    def __mul__(self, scalar) -> "SparseOperator":
        return SparseOperator(self.matrix * scalar)

    __rmul__ = __mul__


def site_sum_operator(local: np.ndarray, n_sites: int, hermitian: bool = True) -> SparseOperator:
    """sum_j local^{(j)} for a 4x4 single-site matrix ``local``."""
    local = np.asarray(local, dtype=complex)
    dim = LOCAL_DIM ** n_sites
    cols = np.arange(dim, dtype=np.int64)
    rows, vals, cc = [], [], []
    for j in range(n_sites):
        shift = 4 ** j
        digit = (cols // shift) % 4
        base = cols - digit * shift
        for new in range(4):
            v = local[new, digit]
            keep = v != 0
            rows.append(base[keep] + new * shift)
            cc.append(cols[keep])
            vals.append(v[keep])
    mat = sp.csr_matrix((np.concatenate(vals), (np.concatenate(rows), np.concatenate(cc))),
                        shape=(dim, dim))
    mat.sum_duplicates()
    mat.eliminate_zeros()
    return SparseOperator(mat, hermitian=hermitian)


def apply_local(matrix, site: int, local: np.ndarray, prune: float = PRUNE) -> sp.csc_matrix:
    """Apply a 4x4 single-site matrix to every column of a sparse (4^N x k) matrix."""
    coo = sp.coo_matrix(matrix)
    shift = 4 ** site
    rows = coo.row.astype(np.int64)
    digit = (rows // shift) % 4
    base = rows - digit * shift
    new_rows, new_cols, new_vals = [], [], []
    local = np.asarray(local, dtype=complex)
    for new in range(4):
        v = local[new, digit] * coo.data
        keep = np.abs(v) > prune
        new_rows.append(base[keep] + new * shift)
        new_cols.append(coo.col[keep])
        new_vals.append(v[keep])
    out = sp.csc_matrix((np.concatenate(new_vals),
                         (np.concatenate(new_rows), np.concatenate(new_cols))),
                        shape=coo.shape)
    out.sum_duplicates()
    out.data[np.abs(out.data) <= prune] = 0
    out.eliminate_zeros()
    return out


def apply_pauli_string(sites_and_paulis: Sequence[tuple[int, str, str]],
                       state: SparseState) -> SparseState:
    """Apply a product of single-qubit Paulis, e.g. ``[(0, 'a', 'X'), (2, 'b', 'Z')]``.

    Each (site, qubit) pair may appear at most once; the factors commute so
    their order is irrelevant.
    """
    n = n_sites_of(state.dim)
    seen = set()
    idx = state.indices.copy()
    amp = state.amplitudes.copy()
    for site, qubit, pauli in sites_and_paulis:
        if not 0 <= site < n:
            raise ValueError(f"site {site} out of range 0..{n - 1}")
        if (site, qubit) in seen:
            raise ValueError(f"duplicate entry for site {site} qubit {qubit}")
        seen.add((site, qubit))
        bit = qubit_bit(site, qubit)
        val = (idx >> bit) & 1
        if pauli == "X":
            idx = idx ^ (1 << bit)
        elif pauli == "Y":
            # Y|0> = i|1>, Y|1> = -i|0>
            amp = amp * np.where(val == 0, 1j, -1j)
            idx = idx ^ (1 << bit)
        elif pauli == "Z":
            amp = amp * np.where(val == 0, 1, -1)
        elif pauli != "I":
            raise ValueError(f"unknown Pauli {pauli!r}")
    return SparseState.from_entries(state.dim, idx, amp)


def bipartition_split(index: int, n_a: int, n_sites: int | None = None) -> tuple[int, int]:
    """Split a basis index into (row over the first n_a sites, col over the rest)."""
    if n_a < 0 or (n_sites is not None and n_a > n_sites):
        raise ValueError(f"n_a={n_a} out of range")
    if index < 0 or (n_sites is not None and index >= LOCAL_DIM ** n_sites):
        raise ValueError(f"index {index} out of range")
    size_a = LOCAL_DIM ** n_a
    return index % size_a, index // size_a


def bipartition_join(row: int, col: int, n_a: int) -> int:
    return col * LOCAL_DIM ** n_a + row


def as_matrix(vec: np.ndarray, n_sites: int, n_a: int) -> np.ndarray:
    """Dense state (or batch with trailing axis) as the (4^N_A x 4^N_B) coefficient matrix."""
    vec = np.asarray(vec)
    d_a, d_b = LOCAL_DIM ** n_a, LOCAL_DIM ** (n_sites - n_a)
    if vec.ndim == 1:
        return vec.reshape(d_b, d_a).T
    # batch: (4^N, k) -> (k, d_a, d_b)
    return vec.T.reshape(-1, d_b, d_a).transpose(0, 2, 1)


def spread_bits(values: np.ndarray, n: int, offset: int) -> np.ndarray:
    """Place bit k of ``values`` at bit 2k + offset (offset 1 = a-qubits, 0 = b-qubits)."""
    values = np.asarray(values, dtype=np.int64)
    out = np.zeros_like(values)
    for k in range(n):
        out |= ((values >> k) & 1) << (2 * k + offset)
    return out


def embed_a_factor(a_vectors: np.ndarray, n_sites: int) -> sp.csc_matrix:
    """Tensor dense a-factor vectors (2^N x k) with every b computational state.

    Column ``l * 2^N + beta`` is ``a_vectors[:, l] (x) |beta>_b``.
    """
    a_vectors = np.asarray(a_vectors, dtype=complex)
    n_a_states, k = a_vectors.shape
    nb = 2 ** n_sites
    if n_a_states != nb:
        raise ValueError("a-factor vectors must have length 2^N")
    a_pos = spread_bits(np.arange(nb), n_sites, 1)
    b_pos = spread_bits(np.arange(nb), n_sites, 0)
    nz_rows, nz_cols = np.nonzero(np.abs(a_vectors) > PRUNE)
    # column-major ordering of (l, beta): for each l, each beta
    order = np.lexsort((nz_rows, nz_cols))
    nz_rows, nz_cols = nz_rows[order], nz_cols[order]
    rows = (a_pos[nz_rows][None, :] | b_pos[:, None])  # (nb, nnz_a)
    vals = np.broadcast_to(a_vectors[nz_rows, nz_cols][None, :], rows.shape)
    cols = nz_cols[None, :] * nb + np.arange(nb)[:, None]
    return sp.csc_matrix((vals.ravel(), (rows.ravel(), cols.ravel())),
                         shape=(LOCAL_DIM ** n_sites, k * nb))


def columns_as_states(matrix) -> list[SparseState]:
    csc = sp.csc_matrix(matrix)
    csc.sort_indices()
    dim = csc.shape[0]
    return [SparseState(dim, csc.indices[csc.indptr[i]:csc.indptr[i + 1]],
                        csc.data[csc.indptr[i]:csc.indptr[i + 1]])
            for i in range(csc.shape[1])]


def states_as_columns(states: Iterable[SparseState]) -> sp.csc_matrix:
    states = list(states)
    if not states:
        raise ValueError("no states given")
    dim = states[0].dim
    indptr = np.cumsum([0] + [s.nnz for s in states])
    indices = np.concatenate([s.indices for s in states])
    data = np.concatenate([s.amplitudes for s in states])
    return sp.csc_matrix((data, indices, indptr), shape=(dim, len(states)))

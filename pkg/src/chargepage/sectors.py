"""Orthonormal bases for the charge sectors of both models.

Half-integer quantum numbers are handled internally as doubled integers.
Commuting-model labels ``(c_x, c_y, c_z)`` are halved eigenvalues of
``C_1, C_2, C_3`` so that they share a scale with ``(s, m)``.
"""

from __future__ import annotations

import itertools
import json
from dataclasses import asdict, dataclass
from fractions import Fraction
from functools import lru_cache
from math import factorial
from typing import Literal, Sequence

import numpy as np
import scipy.sparse as sp

from .asymptotics import catalan, multinomial
from .charges import (BELL_EIGENVALUES, BELL_STATES, ChargeFamily, CheckReport, Model,
                      c_charge, charge, local_eigenbasis, q_charge)
from .lattice import (LOCAL_DIM, PRUNE, SparseState, apply_local, columns_as_states,
                      embed_a_factor)

Kind = Literal["microcanonical", "amc", "single-charge", "joint-commuting"]


class SectorEmptyError(ValueError):
    """Requested sector does not exist for the given system size or labels."""


def _twice(x, name: str = "label") -> int:
    t = Fraction(x).limit_denominator(2) * 2
    if t.denominator != 1 or abs(float(x) * 2 - int(t)) > 1e-9:
        raise ValueError(f"{name}={x} is not an integer or half-integer")
    return int(t)


def _half(t: int) -> float:
    return t / 2


@dataclass(frozen=True)
class SectorLabel:
    model: str
    kind: str
    n_sites: int
    s: float | None = None
    m: float | None = None
    c: tuple[float, float, float] | None = None
    alpha: int | None = None

    def __post_init__(self):
        n = self.n_sites
        if self.s is not None:
            s2, m2 = _twice(self.s, "s"), _twice(self.m, "m")
            if not (abs(m2) <= s2 <= n and (s2 - n) % 2 == 0 and (m2 - s2) % 2 == 0):
                raise SectorEmptyError(f"invalid (s, m) = ({self.s}, {self.m}) for N={n}")
        if self.c is not None:
            for x in self.c:
                x2 = _twice(x, "c")
                if abs(x2) > n or (x2 - n) % 2:
                    raise SectorEmptyError(f"invalid commuting label {self.c} for N={n}")

    @property
    def slug(self) -> str:
        parts = [f"N{self.n_sites}", self.model, self.kind]
        if self.s is not None:
            parts.append(f"s{_fmt(self.s)}m{_fmt(self.m)}")
        if self.c is not None:
            parts.append("c" + ",".join(_fmt(x) for x in self.c))
        if self.alpha is not None:
            parts.append(f"alpha{self.alpha}")
        return "-".join(parts)

    def to_dict(self) -> dict:
        d = asdict(self)
        if d["c"] is not None:
            d["c"] = list(d["c"])
        return d

    @classmethod
    def from_dict(cls, d: dict) -> "SectorLabel":
        d = dict(d)
        if d.get("c") is not None:
            d["c"] = tuple(d["c"])
        return cls(**d)


def _fmt(x: float) -> str:
    return str(int(x)) if float(x).is_integer() else f"{int(2 * x)}/2"


@dataclass(frozen=True)
class BellPopulation:
    """Numbers of sites in Bell states B1..B4."""

    counts: tuple[int, int, int, int]

    def __post_init__(self):
        if len(self.counts) != 4 or any(c < 0 for c in self.counts):
            raise ValueError(f"invalid Bell population {self.counts}")

    @property
    def n_sites(self) -> int:
        return sum(self.counts)

    @property
    def class_dim(self) -> int:
        return multinomial(self.n_sites, self.counts)

    def halved_eigenvalues(self) -> tuple[float, float, float]:
        p = np.array(self.counts)
        return tuple(float(p @ BELL_EIGENVALUES[:, k]) / 2 for k in range(3))

    @classmethod
    def solve(cls, n_sites: int, c_x, c_y, c_z) -> "BellPopulation | None":
        """Unique population with the given halved eigenvalues, or None."""
        x, y, z = (_twice(v, "c") for v in (c_x, c_y, c_z))
        nums = (n_sites - x - y - z, n_sites - x + y + z, n_sites + x - y + z,
                n_sites + x + y - z)
        if any(v % 4 or v < 0 for v in nums):
            return None
        return cls(tuple(v // 4 for v in nums))


class SectorBasis:
    """Orthonormal basis of a labelled subspace, stored as a sparse 4^N x D matrix."""

    def __init__(self, label: SectorLabel, matrix, parts: Sequence[SectorLabel] = ()):
        self.label = label
        mat = sp.csc_matrix(matrix, dtype=complex)
        mat.sort_indices()
        self.matrix = mat
        self.parts = tuple(parts)

    @property
    def dim(self) -> int:
        return self.matrix.shape[1]

    @property
    def hilbert_dim(self) -> int:
        return self.matrix.shape[0]

    @property
    def n_sites(self) -> int:
        return self.label.n_sites

    @property
    def vectors(self) -> list[SparseState]:
        return columns_as_states(self.matrix)

    def __len__(self) -> int:
        return self.dim

    def __repr__(self) -> str:
        return f"SectorBasis({self.label.slug}, dim={self.dim})"

    def gram_error(self) -> float:
        """max |G - 1| over the Gram matrix."""
        if self.dim == 0:
            return 0.0
        gram = (self.matrix.conj().T @ self.matrix).toarray()
        return float(np.max(np.abs(gram - np.eye(self.dim))))

    def eigen_residual(self, operator, eigenvalue: float) -> float:
        """max over basis vectors of ||O v - lambda v||."""
        if self.dim == 0:
            return 0.0
        mat = operator.matrix if hasattr(operator, "matrix") else operator
        res = (mat @ self.matrix - eigenvalue * self.matrix)
        res = sp.csc_matrix(res)
        norms = np.sqrt(np.asarray(abs(res).power(2).sum(axis=0))).ravel()
        return float(norms.max(initial=0.0))

    def save(self, path) -> None:
        """Write to an ``.npz`` container: label JSON plus the CSC arrays."""
        m = self.matrix
        np.savez_compressed(
            path,
            label=json.dumps(self.label.to_dict()),
            parts=json.dumps([p.to_dict() for p in self.parts]),
            shape=np.array(m.shape, dtype=np.int64),
            data=m.data, indices=m.indices, indptr=m.indptr,
        )

    @classmethod
    def load(cls, path) -> "SectorBasis":
        with np.load(path, allow_pickle=False) as f:
            label = SectorLabel.from_dict(json.loads(str(f["label"])))
            parts = [SectorLabel.from_dict(p) for p in json.loads(str(f["parts"]))]
            mat = sp.csc_matrix((f["data"], f["indices"], f["indptr"]),
                                shape=tuple(f["shape"]))
        return cls(label, mat, parts)


# -- product states ---------------------------------------------------------

def _local_components(local_vectors: np.ndarray):
    """Pad the nonzero components of each local vector to a common width."""
    width = max(int(np.sum(np.abs(local_vectors[:, k]) > PRUNE))
                for k in range(local_vectors.shape[1]))
    digits = np.zeros((local_vectors.shape[1], width), dtype=np.int64)
    amps = np.zeros((local_vectors.shape[1], width), dtype=complex)
    for k in range(local_vectors.shape[1]):
        nz = np.flatnonzero(np.abs(local_vectors[:, k]) > PRUNE)
        digits[k, :nz.size] = nz
        amps[k, :nz.size] = local_vectors[nz, k]
    return digits, amps


def product_states(local_vectors: np.ndarray, configs: np.ndarray,
                   chunk: int = 512) -> sp.csc_matrix:
    """Columns ``(x)_j local_vectors[:, configs[i, j]]`` with site j the j-th factor."""
    configs = np.atleast_2d(np.asarray(configs, dtype=np.int64))
    k_total, n = configs.shape
    digits, amps = _local_components(np.asarray(local_vectors, dtype=complex))
    width = digits.shape[1]
    choices = np.array(list(itertools.product(range(width), repeat=n)), dtype=np.int64)
    choices = choices.reshape(-1, n)
    weights = LOCAL_DIM ** np.arange(n, dtype=np.int64)
    blocks = []
    for start in range(0, k_total, chunk):
        cfg = configs[start:start + chunk]
        dig = digits[cfg[:, None, :], choices[None, :, :]]
        amp = np.prod(amps[cfg[:, None, :], choices[None, :, :]], axis=2)
        rows = dig @ weights
        cols = np.broadcast_to(np.arange(cfg.shape[0])[:, None], rows.shape)
        keep = np.abs(amp) > PRUNE
        blocks.append(sp.csc_matrix((amp[keep], (rows[keep], cols[keep])),
                                    shape=(LOCAL_DIM ** n, cfg.shape[0])))
    if not blocks:
        return sp.csc_matrix((LOCAL_DIM ** n, 0), dtype=complex)
    return sp.hstack(blocks, format="csc")


def _all_configs(n_sites: int, n_local: int = 4) -> np.ndarray:
    return np.array(list(itertools.product(range(n_local), repeat=n_sites)),
                    dtype=np.int64).reshape(-1, n_sites)


def bell_product_basis(pop: BellPopulation | Sequence[int]) -> list[SparseState]:
    """All tensor products of Bell states with the given population."""
    if not isinstance(pop, BellPopulation):
        pop = BellPopulation(tuple(pop))
    return columns_as_states(_bell_matrix(pop))


def _bell_matrix(pop: BellPopulation) -> sp.csc_matrix:
    n = pop.n_sites
    cfgs = _all_configs(n)
    counts = np.stack([(cfgs == k).sum(axis=1) for k in range(4)], axis=1)
    cfgs = cfgs[np.all(counts == np.array(pop.counts), axis=1)]
    return product_states(BELL_STATES.T, cfgs)


# -- coupled spins ----------------------------------------------------------

@lru_cache(maxsize=None)
def _coupled_table(n_spins: int) -> dict[tuple[int, int], np.ndarray]:
    """All (2s, 2m) -> (2^n x mult) coupled bases via sequential spin-1/2 coupling.

    Spin k occupies bit k; bit 0 is spin up.
    """
    if n_spins < 1:
        raise ValueError("n_spins must be >= 1")
    up = np.array([1.0, 0.0])
    dn = np.array([0.0, 1.0])
    table = {(1, 1): up[:, None], (1, -1): dn[:, None]}
    for k in range(1, n_spins):
        new: dict[tuple[int, int], list[np.ndarray]] = {}
        size = 2 ** k
        j1_values = sorted({j for j, _ in table})
        for j2 in sorted({j + d for j in j1_values for d in (-1, 1) if j + d >= 0}):
            for m2 in range(-j2, j2 + 1, 2):
                cols = []
                for j1 in (j2 - 1, j2 + 1):
                    if j1 not in j1_values:
                        continue
                    norm = 2 * (j1 + 1)
                    vec = None
                    for sigma in (1, -1):
                        old = table.get((j1, m2 - sigma))
                        if old is None:
                            continue
                        if j2 == j1 + 1:
                            num = j1 + m2 + 1 if sigma == 1 else j1 - m2 + 1
                            coeff = np.sqrt(num / norm)
                        else:
                            num = j1 - m2 + 1 if sigma == 1 else j1 + m2 + 1
                            coeff = np.sqrt(num / norm) * (-1 if sigma == 1 else 1)
                        if coeff == 0:
                            continue
                        spin = up if sigma == 1 else dn
                        # new spin is the most significant bit
                        term = coeff * np.kron(spin[:, None], old)
                        vec = term if vec is None else vec + term
                    if vec is not None:
                        cols.append(vec)
                if cols:
                    new[(j2, m2)] = np.hstack(cols)
        table = {key: val for key, val in new.items()}
        assert all(v.shape[0] == 2 * size for v in table.values())
    return table


def coupled_spin_vectors(n_spins: int, s, m) -> np.ndarray:
    """Dense (2^n x C) array of the (s, m) coupled basis; C may be 0."""
    s2, m2 = _twice(s, "s"), _twice(m, "m")
    if not (abs(m2) <= s2 <= n_spins and (s2 - n_spins) % 2 == 0 and (m2 - s2) % 2 == 0):
        return np.zeros((2 ** n_spins, 0))
    return _coupled_table(n_spins).get((s2, m2), np.zeros((2 ** n_spins, 0)))


def coupled_spin_basis(n_spins: int, s, m) -> list[SparseState]:
    """Orthonormal (s, m) eigenbasis of n spin-1/2's; empty for inconsistent labels."""
    vecs = coupled_spin_vectors(n_spins, s, m)
    return [SparseState.from_dense(vecs[:, k]) for k in range(vecs.shape[1])]


# -- sectors ----------------------------------------------------------------

def amc_noncommuting(n_sites: int, s, m) -> SectorBasis:
    """(s, m) eigenspace of (S_a^2, Z_a^tot / 2) tensored with the full b space."""
    label = SectorLabel("noncommuting", "amc", n_sites, s=float(s), m=float(m))
    vecs = coupled_spin_vectors(n_sites, s, m)
    return SectorBasis(label, embed_a_factor(vecs, n_sites))


def microcanonical_noncommuting(n_sites: int) -> SectorBasis:
    """Joint eigenvalue-0 eigenspace of Q_1, Q_2, Q_3 (exists for even N)."""
    if n_sites % 2:
        raise SectorEmptyError(f"no noncommuting microcanonical sector for odd N={n_sites}")
    label = SectorLabel("noncommuting", "microcanonical", n_sites, s=0.0, m=0.0)
    return SectorBasis(label, embed_a_factor(coupled_spin_vectors(n_sites, 0, 0), n_sites))


def commuting_sector(n_sites: int, c_x, c_y, c_z) -> SectorBasis:
    """Joint eigenspace of C_1, C_2, C_3 with halved eigenvalues (c_x, c_y, c_z)."""
    label = SectorLabel("commuting", "joint-commuting", n_sites,
                        c=(float(c_x), float(c_y), float(c_z)))
    pop = BellPopulation.solve(n_sites, c_x, c_y, c_z)
    if pop is None:
        return SectorBasis(label, sp.csc_matrix((LOCAL_DIM ** n_sites, 0), dtype=complex))
    return SectorBasis(label, _bell_matrix(pop))


def microcanonical_commuting(n_sites: int) -> SectorBasis:
    """Joint eigenvalue-0 eigenspace of C_1, C_2, C_3 (exists for N divisible by 4)."""
    if n_sites % 4:
        raise SectorEmptyError(f"no commuting microcanonical sector for N={n_sites}")
    base = commuting_sector(n_sites, 0, 0, 0)
    label = SectorLabel("commuting", "microcanonical", n_sites, c=(0.0, 0.0, 0.0))
    return SectorBasis(label, base.matrix)


def microcanonical(model: Model, n_sites: int) -> SectorBasis:
    if model == "noncommuting":
        return microcanonical_noncommuting(n_sites)
    if model == "commuting":
        return microcanonical_commuting(n_sites)
    raise ValueError(f"unknown model {model!r}")


def single_charge_sector(model: Model, alpha: int, n_sites: int) -> SectorBasis:
    """Eigenvalue-0 eigenspace of one global charge."""
    if n_sites % 2:
        raise SectorEmptyError(f"single-charge zero sector needs even N, got {n_sites}")
    evals, vecs = local_eigenbasis(model, alpha)
    cfgs = _all_configs(n_sites)
    cfgs = cfgs[np.abs(evals[cfgs].sum(axis=1)) < 0.5]
    label = SectorLabel(model, "single-charge", n_sites, alpha=alpha)
    return SectorBasis(label, product_states(vecs, cfgs))


# -- outcome distributions --------------------------------------------------

@dataclass(frozen=True)
class OutcomeDistribution:
    """Probabilities of halved charge eigenvalues gamma."""

    gammas: tuple[float, ...]
    probs: tuple[float, ...]

    @classmethod
    def from_mapping(cls, mapping: dict) -> "OutcomeDistribution":
        keys = sorted(mapping)
        return cls(tuple(float(k) for k in keys), tuple(float(mapping[k]) for k in keys))

    def as_dict(self) -> dict[float, float]:
        return dict(zip(self.gammas, self.probs))

    def __getitem__(self, gamma) -> float:
        return self.as_dict().get(float(gamma), 0.0)

    def total(self) -> float:
        return float(sum(self.probs))

    def max_abs_diff(self, other: "OutcomeDistribution") -> float:
        keys = set(self.gammas) | set(other.gammas)
        return max((abs(self[k] - other[k]) for k in keys), default=0.0)

    def allclose(self, other: "OutcomeDistribution", atol: float = 1e-9) -> bool:
        return self.max_abs_diff(other) <= atol

    def dense(self, s) -> list[float]:
        """Probabilities on the full grid -s..s (missing outcomes are 0)."""
        s2 = _twice(s, "s")
        return [self[g / 2] for g in range(-s2, s2 + 1, 2)]

    def peak_count(self, tol: float = 1e-12) -> int:
        """Number of local maxima, plateaus counted once."""
        p = [x for x in self.probs]
        # collapse plateaus
        vals = [p[0]]
        for x in p[1:]:
            if abs(x - vals[-1]) > tol:
                vals.append(x)
        peaks = 0
        for i, x in enumerate(vals):
            left = vals[i - 1] if i > 0 else -np.inf
            right = vals[i + 1] if i + 1 < len(vals) else -np.inf
            if x > left and x > right:
                peaks += 1
        return peaks

    def is_single_peaked(self) -> bool:
        return self.peak_count() == 1


def outcome_distribution(basis: SectorBasis, fam: ChargeFamily) -> OutcomeDistribution:
    """p(gamma) = (1/D) sum_l ||Pi_gamma psi_l||^2 for the charge's eigenprojectors.

    Each basis column is rotated site by site into the local eigenbasis of the
    charge, after which the eigenvalue of every computational index is known.
    """
    if basis.dim == 0:
        raise SectorEmptyError("outcome distribution of an empty sector")
    evals, vecs = fam.eigenbasis()
    rot = vecs.conj().T
    mat = basis.matrix
    for j in range(basis.n_sites):
        mat = apply_local(mat, j, rot)
    coo = mat.tocoo()
    rows = coo.row.astype(np.int64)
    twice = np.zeros(rows.shape, dtype=np.int64)
    for j in range(basis.n_sites):
        twice += np.rint(evals[(rows // 4 ** j) % 4]).astype(np.int64)
    weights = np.abs(coo.data) ** 2
    keys, inv = np.unique(twice, return_inverse=True)
    sums = np.zeros(keys.size)
    np.add.at(sums, inv, weights)
    sums /= basis.dim
    return OutcomeDistribution(tuple(k / 2 for k in keys), tuple(sums))


def wigner_d_distribution(s, m) -> OutcomeDistribution:
    """|d^s_{gamma, m}(pi/2)|^2 for gamma = -s..s, evaluated in exact arithmetic."""
    j2, m2 = _twice(s, "s"), _twice(m, "m")
    if abs(m2) > j2 or (j2 - m2) % 2:
        raise ValueError(f"invalid (s, m) = ({s}, {m})")
    probs = {}
    for g2 in range(-j2, j2 + 1, 2):
        # Wigner's formula at beta = pi/2: every cos/sin factor is 2^{-1/2}
        jp, jm = (j2 + g2) // 2, (j2 - g2) // 2
        kp, km = (j2 + m2) // 2, (j2 - m2) // 2
        total = Fraction(0)
        for k in range(0, j2 + 1):
            a, b, c = kp - k, jm - k, k + (g2 - m2) // 2
            if min(a, b, c) < 0:
                continue
            sign = -1 if (c % 2) else 1
            total += Fraction(sign, factorial(a) * factorial(k) * factorial(b) * factorial(c))
        value = total * total * factorial(jp) * factorial(jm) * factorial(kp) * factorial(km)
        probs[g2 / 2] = float(value / 2 ** j2)
    return OutcomeDistribution.from_mapping(probs)


def _p_family(basis: SectorBasis, model: Model) -> list[OutcomeDistribution]:
    return [outcome_distribution(basis, charge(model, alpha, basis.n_sites))
            for alpha in (1, 2, 3)]


def amc_commuting_analog(n_sites: int, s, m, atol: float = 1e-9
                         ) -> tuple[SectorBasis, bool]:
    """Union of commuting sectors (c_x, c_y, m) with |c_x|, |c_y| <= s.

    ``matched`` is True when all three outcome distributions equal those of
    the noncommuting (s, m) sector.
    """
    s2, m2 = _twice(s, "s"), _twice(m, "m")
    label = SectorLabel("commuting", "amc", n_sites, s=float(s), m=float(m))
    parts, blocks = [], []
    for x2 in range(-s2, s2 + 1):
        for y2 in range(-s2, s2 + 1):
            if (x2 - n_sites) % 2 or (y2 - n_sites) % 2:
                continue
            sec = commuting_sector(n_sites, x2 / 2, y2 / 2, m2 / 2)
            if sec.dim:
                parts.append(sec.label)
                blocks.append(sec.matrix)
    if not blocks:
        return SectorBasis(label, sp.csc_matrix((LOCAL_DIM ** n_sites, 0), dtype=complex)), False
    union = SectorBasis(label, sp.hstack(blocks, format="csc"), parts)
    target = amc_noncommuting(n_sites, s, m)
    if target.dim == 0:
        return union, False
    p_c = _p_family(union, "commuting")
    p_n = _p_family(target, "noncommuting")
    matched = all(a.allclose(b, atol) for a, b in zip(p_c, p_n))
    return union, matched


# -- constraint counting ----------------------------------------------------

def _null_dim(mats: Sequence[np.ndarray], tol: float = 1e-9) -> int:
    stacked = np.vstack(mats)
    sv = np.linalg.svd(stacked, compute_uv=False)
    return stacked.shape[1] - int(np.sum(sv > tol))


def partial_constraint_check(n_sites: int) -> CheckReport:
    """Compare how far C_1, C_2 versus Q_1, Q_2 restrict the third charge.

    At N=4 the joint kernels come from dense null spaces.  At N=8 the Q
    kernels are computed on the a-qubit factor (the Q charges act trivially
    on the b qubits) and the C kernels by Bell-population counting.
    """
    if n_sites not in (4, 8):
        raise ValueError("partial_constraint_check supports N = 4 or 8")
    report = CheckReport()
    dim_n0 = catalan(n_sites // 2, n_sites // 2) * 2 ** n_sites
    dim_c0 = multinomial(n_sites, [n_sites // 4] * 4)
    if n_sites == 4:
        q = [q_charge(a, n_sites).operator.toarray() for a in (1, 2)]
        c = [c_charge(a, n_sites).operator.toarray() for a in (1, 2, 3)]
        ker_q12 = _null_dim(q)
        ker_c12 = _null_dim(c[:2])
        ker_c123 = _null_dim(c)
    else:
        from .charges import _spin_ops_a_factor
        xa, ya, _ = _spin_ops_a_factor(n_sites)
        ker_q12 = _null_dim([xa.toarray(), ya.toarray()]) * 2 ** n_sites
        ker_c12 = ker_c123 = 0
        for p in _populations(n_sites):
            cx, cy, cz = BellPopulation(p).halved_eigenvalues()
            if cx == 0 and cy == 0:
                ker_c12 += multinomial(n_sites, p)
                if cz == 0:
                    ker_c123 += multinomial(n_sites, p)
    report.values = {"ker_C1_C2": ker_c12, "ker_C1_C2_C3": ker_c123, "dim_C0": dim_c0,
                     "ker_Q1_Q2": ker_q12, "dim_N0": dim_n0}
    report.add("joint C1,C2,C3 kernel equals C0", ker_c123 == dim_c0,
               f"{ker_c123} vs {dim_c0}")
    report.add("joint Q1,Q2 kernel equals N0", ker_q12 == dim_n0, f"{ker_q12} vs {dim_n0}")
    report.add("joint C1,C2 kernel strictly exceeds C0", ker_c12 > dim_c0,
               f"{ker_c12} > {dim_c0}")
    if n_sites == 4:
        c3 = c_charge(3, n_sites).operator
        for p in _populations(n_sites):
            if p[0] != p[3] or p[1] != p[2]:
                continue
            sec = SectorBasis(SectorLabel("commuting", "joint-commuting", n_sites,
                                          c=BellPopulation(p).halved_eigenvalues()),
                              _bell_matrix(BellPopulation(p)))
            expected = 2 * (p[1] - p[0])
            res = sec.eigen_residual(c3, expected)
            report.add(f"C3 = 2(P2 - P1) = {expected} on population {p}", res <= 1e-9)
    return report


def _populations(n_sites: int):
    for p1 in range(n_sites + 1):
        for p2 in range(n_sites + 1 - p1):
            for p3 in range(n_sites + 1 - p1 - p2):
                yield (p1, p2, p3, n_sites - p1 - p2 - p3)


def list_sectors(n_sites: int) -> list[tuple[SectorLabel, int]]:
    """Labels and dimensions of the microcanonical and s=m AMC sectors, without building bases."""
    rows: list[tuple[SectorLabel, int]] = []
    if n_sites % 2 == 0:
        rows.append((SectorLabel("noncommuting", "microcanonical", n_sites, s=0.0, m=0.0),
                     catalan(n_sites // 2, n_sites // 2) * 2 ** n_sites))
    if n_sites % 4 == 0:
        rows.append((SectorLabel("commuting", "microcanonical", n_sites, c=(0.0, 0.0, 0.0)),
                     multinomial(n_sites, [n_sites // 4] * 4)))
    s2 = n_sites % 2
    while s2 <= n_sites:
        if s2 > 0:
            mult = catalan((n_sites + s2) // 2, (n_sites - s2) // 2)
            rows.append((SectorLabel("noncommuting", "amc", n_sites, s=s2 / 2, m=s2 / 2),
                         mult * 2 ** n_sites))
            dim_c = 0
            for x2 in range(-s2, s2 + 1):
                for y2 in range(-s2, s2 + 1):
                    pop = BellPopulation.solve(n_sites, x2 / 2, y2 / 2, s2 / 2) \
                        if (x2 - n_sites) % 2 == 0 and (y2 - n_sites) % 2 == 0 else None
                    if pop is not None:
                        dim_c += pop.class_dim
            rows.append((SectorLabel("commuting", "amc", n_sites, s=s2 / 2, m=s2 / 2), dim_c))
        s2 += 2
    return rows

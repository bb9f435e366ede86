"""Global charges of the two lattice models and checks of the analogy criteria."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Literal

import numpy as np
import scipy.sparse as sp

from .lattice import PAULI, SparseOperator, site_sum_operator

Model = Literal["noncommuting", "commuting"]
MODELS = ("noncommuting", "commuting")
_AXES = {1: "X", 2: "Y", 3: "Z"}

# Single-site Bell states in the (a, b) digit basis 2a + b, spin up = 0.
# Rows: B1..B4, simultaneous eigenvectors of X(x)X, Y(x)Y, Z(x)Z.
BELL_STATES = np.array([
    [0, -1, 1, 0],   # (|du> - |ud>)/sqrt2
    [-1, 0, 0, 1],   # (|dd> - |uu>)/sqrt2
    [1, 0, 0, 1],    # (|dd> + |uu>)/sqrt2
    [0, 1, 1, 0],    # (|du> + |ud>)/sqrt2
], dtype=complex) / np.sqrt(2)
BELL_EIGENVALUES = np.array([
    [-1, -1, -1],
    [-1, 1, 1],
    [1, -1, 1],
    [1, 1, -1],
])


def _check_alpha(alpha: int) -> None:
    if alpha not in _AXES:
        raise ValueError(f"alpha must be 1, 2 or 3, got {alpha!r}")


def local_charge(model: Model, alpha: int) -> np.ndarray:
    """Single-site observable: P_a (x) 1_b or P_a (x) P_b."""
    _check_alpha(alpha)
    pauli = PAULI[_AXES[alpha]]
    if model == "noncommuting":
        return np.kron(pauli, PAULI["I"])
    if model == "commuting":
        return np.kron(pauli, pauli)
    raise ValueError(f"unknown model {model!r}")


def local_eigenbasis(model: Model, alpha: int) -> tuple[np.ndarray, np.ndarray]:
    """(eigenvalues, columns of eigenvectors) of the single-site charge.

    Eigenvectors are chosen with at most two nonzero components, which keeps
    product states over sites at 2^N nonzero amplitudes.
    """
    _check_alpha(alpha)
    if model == "commuting":
        return BELL_EIGENVALUES[:, alpha - 1].astype(float), BELL_STATES.T.copy()
    vals, vecs = np.linalg.eigh(PAULI[_AXES[alpha]])
    evals, cols = [], []
    for k in range(2):
        for b in range(2):
            evals.append(vals[k])
            cols.append(np.kron(vecs[:, k], np.eye(2)[b]))
    return np.array(evals), np.array(cols).T


@dataclass(frozen=True, eq=False)
class ChargeFamily:
    model: Model
    alpha: int
    n_sites: int
    operator: SparseOperator = field(repr=False)

    @property
    def local(self) -> np.ndarray:
        return local_charge(self.model, self.alpha)

    def eigenbasis(self) -> tuple[np.ndarray, np.ndarray]:
        return local_eigenbasis(self.model, self.alpha)


def _charge(model: Model, alpha: int, n_sites: int) -> ChargeFamily:
    if n_sites < 1:
        raise ValueError("n_sites must be >= 1")
    op = site_sum_operator(local_charge(model, alpha), n_sites)
    return ChargeFamily(model, alpha, n_sites, op)


def q_charge(alpha: int, n_sites: int) -> ChargeFamily:
    """Noncommuting global charge sum_j P_a^{(j)}, P = X, Y, Z for alpha = 1, 2, 3."""
    return _charge("noncommuting", alpha, n_sites)


def c_charge(alpha: int, n_sites: int) -> ChargeFamily:
    """Commuting global charge sum_j P_a^{(j)} P_b^{(j)}."""
    return _charge("commuting", alpha, n_sites)


def charge(model: Model, alpha: int, n_sites: int) -> ChargeFamily:
    return _charge(model, alpha, n_sites)


def z_a_total(n_sites: int) -> SparseOperator:
    return q_charge(3, n_sites).operator


def _spin_ops_a_factor(n_sites: int) -> list[sp.csr_matrix]:
    dim = 2 ** n_sites
    out = []
    for name in ("X", "Y", "Z"):
        total = sp.csr_matrix((dim, dim), dtype=complex)
        for k in range(n_sites):
            # spin k is bit k of the a-factor index
            mats = [sp.identity(2, format="csr", dtype=complex)] * n_sites
            mats[n_sites - 1 - k] = sp.csr_matrix(PAULI[name])
            term = mats[0]
            for m in mats[1:]:
                term = sp.kron(term, m, format="csr")
            total = total + term
        out.append(total)
    return out


def spin_squared_a(n_sites: int, a_factor_only: bool = False) -> SparseOperator:
    """Total spin squared of the a-qubits, [(X_a)^2 + (Y_a)^2 + (Z_a)^2] / 4.

    With ``a_factor_only`` the operator acts on the 2^N a-qubit space, with
    spin k on bit k; otherwise on the full 4^N lattice space.
    """
    if n_sites < 1:
        raise ValueError("n_sites must be >= 1")
    if a_factor_only:
        ops = _spin_ops_a_factor(n_sites)
    else:
        ops = [q_charge(alpha, n_sites).operator.matrix for alpha in (1, 2, 3)]
    total = sum(o @ o for o in ops) / 4
    return SparseOperator(total, hermitian=True)


def z_a_factor(n_sites: int) -> SparseOperator:
    """Z_a^tot restricted to the 2^N a-qubit space."""
    return SparseOperator(_spin_ops_a_factor(n_sites)[2], hermitian=True)


@dataclass
class CheckReport:
    """Named pass/fail entries; ``ok`` is their conjunction."""

    entries: list[tuple[str, bool, str]] = field(default_factory=list)
    values: dict = field(default_factory=dict)

    def add(self, name: str, passed: bool, detail: str = "") -> None:
        self.entries.append((name, bool(passed), detail))

    @property
    def ok(self) -> bool:
        return all(p for _, p, _ in self.entries)

    def failures(self) -> list[str]:
        return [n for n, p, _ in self.entries if not p]

    def lines(self) -> list[str]:
        return [f"[{'PASS' if p else 'FAIL'}] {n}" + (f": {d}" if d else "")
                for n, p, d in self.entries]

    def extend(self, other: "CheckReport", prefix: str = "") -> None:
        for n, p, d in other.entries:
            self.entries.append((prefix + n, p, d))


_EPS = {(1, 2, 3): 1, (2, 3, 1): 1, (3, 1, 2): 1,
        (2, 1, 3): -1, (3, 2, 1): -1, (1, 3, 2): -1}


def verify_criteria(n_sites: int, tol: float = 1e-10) -> CheckReport:
    """Numerically check the structural analogy between the two models.

    Dense linear algebra is used, so ``n_sites`` is limited to 4.
    """
    if not 1 <= n_sites <= 4:
        raise ValueError("verify_criteria uses dense matrices; n_sites must be 1..4")
    report = CheckReport()
    eye4 = np.eye(4)
    for model in MODELS:
        for alpha in (1, 2, 3):
            fam = charge(model, alpha, n_sites)
            dense = fam.operator.toarray()
            # extensivity: identical single-site term on every site
            manual = np.zeros_like(dense)
            for j in range(n_sites):
                term = np.eye(1)
                for k in reversed(range(n_sites)):
                    term = np.kron(term, fam.local if k == j else eye4)
                manual += term
            report.add(f"{model} charge {alpha} is a site sum",
                       np.max(np.abs(manual - dense)) <= tol)
            spec = np.linalg.eigvalsh(dense)
            allowed = np.arange(-n_sites, n_sites + 1, 2)
            on_grid = np.all(np.min(np.abs(spec[:, None] - allowed[None, :]), axis=1) <= tol)
            report.add(f"{model} charge {alpha} spectrum on grid", on_grid)
    for alpha in (1, 2, 3):
        sq = np.sort(np.linalg.eigvalsh(q_charge(alpha, n_sites).operator.toarray()))
        sc = np.sort(np.linalg.eigvalsh(c_charge(alpha, n_sites).operator.toarray()))
        err = float(np.max(np.abs(sq - sc)))
        report.add(f"equal spectra Q{alpha}/C{alpha}", err <= tol, f"max diff {err:.1e}")
    for (a, b, c), sign in _EPS.items():
        qa, qb, qc = (local_charge("noncommuting", x) for x in (a, b, c))
        ca, cb, cc = (local_charge("commuting", x) for x in (a, b, c))
        report.add(f"Q{a}Q{b} = i eps Q{c}", np.allclose(qa @ qb, 1j * sign * qc, atol=tol))
        report.add(f"C{a}C{b} = -C{c}", np.allclose(ca @ cb, -cc, atol=tol))
    for alpha in (1, 2, 3):
        for model in MODELS:
            loc = local_charge(model, alpha)
            report.add(f"{model} local charge {alpha} squares to identity",
                       np.allclose(loc @ loc, eye4, atol=tol))
    return report


def commutator_norm(a: SparseOperator, b: SparseOperator) -> float:
    """Spectral norm of [a, b] (dense; small systems only)."""
    comm = (a.matrix @ b.matrix - b.matrix @ a.matrix).toarray()
    return float(np.linalg.norm(comm, 2))

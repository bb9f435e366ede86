import itertools

import numpy as np
import pytest

from chargepage.charges import (BELL_EIGENVALUES, BELL_STATES, c_charge, charge,
                                commutator_norm, local_charge, local_eigenbasis, q_charge,
                                spin_squared_a, verify_criteria, z_a_factor, z_a_total)
from chargepage.lattice import LOCAL_DIM


def spectrum_counts(op):
    vals = np.round(np.linalg.eigvalsh(op.toarray())).astype(int)
    return dict(zip(*np.unique(vals, return_counts=True)))


def site_permutation(n, perm):
    """Permutation matrix moving the digit of site j to site perm[j]."""
    dim = LOCAL_DIM ** n
    mat = np.zeros((dim, dim))
    for index in range(dim):
        digits = [(index // 4 ** j) % 4 for j in range(n)]
        new = sum(d * 4 ** perm[j] for j, d in enumerate(digits))
        mat[new, index] = 1
    return mat


def test_single_site_diagonals():
    assert np.allclose(np.diag(q_charge(3, 1).operator.toarray()), [1, 1, -1, -1])
    assert np.allclose(np.diag(c_charge(3, 1).operator.toarray()), [1, -1, -1, 1])


def test_invalid_alpha():
    with pytest.raises(ValueError):
        q_charge(4, 2)
    with pytest.raises(ValueError):
        charge("other", 1, 2)


@pytest.mark.parametrize("model", ["noncommuting", "commuting"])
def test_n2_charge1_spectrum(model):
    assert spectrum_counts(charge(model, 1, 2).operator) == {-2: 4, 0: 8, 2: 4}


def test_zero_eigenspace_dims_at_n4():
    assert spectrum_counts(q_charge(1, 4).operator)[0] == 96
    assert spectrum_counts(c_charge(1, 4).operator)[0] == 96


def test_commuting_family_commutes():
    a, b = c_charge(1, 2).operator, c_charge(2, 2).operator
    comm = (a.matrix @ b.matrix - b.matrix @ a.matrix).toarray()
    assert np.max(np.abs(comm)) < 1e-12


@pytest.mark.parametrize("n", [1, 2, 3])
def test_charges_hermitian_with_sparse_columns(n):
    for model, alpha in itertools.product(("noncommuting", "commuting"), (1, 2, 3)):
        op = charge(model, alpha, n).operator
        assert op.is_hermitian(1e-12)
        assert op.max_nnz_per_column() <= n + 1


def test_spin_squared_eigenvalues():
    assert np.allclose(np.linalg.eigvalsh(spin_squared_a(1, True).toarray()), [0.75, 0.75])
    vals = np.round(np.linalg.eigvalsh(spin_squared_a(2, True).toarray()), 9)
    assert sorted(vals) == [0, 2, 2, 2]
    vals4 = np.round(np.linalg.eigvalsh(spin_squared_a(4, True).toarray()), 9)
    assert np.sum(vals4 == 0) == 2


def test_spin_squared_full_space_and_commutes_with_z():
    s2 = spin_squared_a(3)
    z = z_a_total(3)
    assert s2.is_hermitian()
    assert commutator_norm(s2, z) < 1e-12
    s2a, za = spin_squared_a(3, True), z_a_factor(3)
    assert commutator_norm(s2a, za) < 1e-12
    # full-space multiplicities are the a-factor ones times 2^N
    full = np.round(np.linalg.eigvalsh(s2.toarray()), 9)
    small = np.round(np.linalg.eigvalsh(s2a.toarray()), 9)
    for v in np.unique(small):
        assert np.sum(full == v) == 8 * np.sum(small == v)


@pytest.mark.parametrize("n", [1, 2, 3, 4])
def test_verify_criteria_pass(n):
    report = verify_criteria(n)
    assert report.ok, report.failures()
    assert len(report.lines()) == len(report.entries)


def test_verify_criteria_size_limit():
    with pytest.raises(ValueError):
        verify_criteria(5)


def test_single_site_products():
    c1, c2, c3 = (local_charge("commuting", a) for a in (1, 2, 3))
    assert np.array_equal(c1 @ c2 + c3, np.zeros((4, 4)))
    q1, q2, q3 = (local_charge("noncommuting", a) for a in (1, 2, 3))
    assert np.allclose(q1 @ q2, 1j * q3)


@pytest.mark.parametrize("n", [2, 3, 4])
def test_density_commutator_bound(n):
    for a, b in itertools.combinations((1, 2, 3), 2):
        qa = q_charge(a, n).operator * (1 / n)
        qb = q_charge(b, n).operator * (1 / n)
        assert commutator_norm(qa, qb) <= 2 / n + 1e-12


def test_permutation_invariance():
    n = 3
    rng = np.random.default_rng(0)
    psi = rng.normal(size=64) + 1j * rng.normal(size=64)
    for perm in itertools.permutations(range(n)):
        p = site_permutation(n, perm)
        for model, alpha in itertools.product(("noncommuting", "commuting"), (1, 2, 3)):
            op = charge(model, alpha, n).operator.toarray()
            assert np.allclose(p @ (op @ psi), op @ (p @ psi))


@pytest.mark.parametrize("model", ["noncommuting", "commuting"])
@pytest.mark.parametrize("alpha", [1, 2, 3])
def test_local_eigenbasis(model, alpha):
    vals, vecs = local_eigenbasis(model, alpha)
    loc = local_charge(model, alpha)
    assert np.allclose(vecs.conj().T @ vecs, np.eye(4))
    assert np.allclose(loc @ vecs, vecs * vals)
    assert all(np.count_nonzero(np.abs(vecs[:, k]) > 1e-12) <= 2 for k in range(4))


def test_bell_eigenvalues():
    for k in range(4):
        for alpha in (1, 2, 3):
            loc = local_charge("commuting", alpha)
            assert np.allclose(loc @ BELL_STATES[k], BELL_EIGENVALUES[k, alpha - 1] * BELL_STATES[k])

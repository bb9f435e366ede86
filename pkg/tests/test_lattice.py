import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from chargepage.lattice import (PAULI, LatticeShape, SparseOperator, SparseState, apply_local,
                                apply_pauli_string, as_matrix, bipartition_join,
                                bipartition_split, embed_a_factor, qubit_bit, site_sum_operator)


def dense_local(n, site, local):
    """Kron of a 4x4 matrix at ``site`` with identities; site j is the 4^j digit."""
    out = np.eye(1)
    for k in reversed(range(n)):
        out = np.kron(out, local if k == site else np.eye(4))
    return out


def single_qubit(qubit, pauli):
    p = PAULI[pauli]
    return np.kron(p, np.eye(2)) if qubit == "a" else np.kron(np.eye(2), p)


def random_state(rng, n, nnz=None):
    dim = 4 ** n
    vec = rng.normal(size=dim) + 1j * rng.normal(size=dim)
    if nnz is not None:
        vec[rng.permutation(dim)[nnz:]] = 0
    return SparseState.from_dense(vec / np.linalg.norm(vec))


def test_shape_dimension():
    assert LatticeShape(3).dim == 64
    with pytest.raises(ValueError):
        LatticeShape(0)


def test_bit_layout():
    # site j is the base-4 digit at 4^j, digit = 2a + b
    assert qubit_bit(0, "a") == 1 and qubit_bit(0, "b") == 0
    assert qubit_bit(2, "a") == 5 and qubit_bit(2, "b") == 4


def test_sparse_state_rejects_unsorted_indices():
    with pytest.raises(ValueError):
        SparseState(16, np.array([3, 1]), np.array([1, 1], dtype=complex))
    with pytest.raises(ValueError):
        SparseState(16, np.array([2, 2]), np.array([1, 1], dtype=complex))


def test_from_entries_merges_and_prunes():
    s = SparseState.from_entries(16, [5, 2, 5, 7], [0.5, 1.0, 0.5, 1e-16])
    assert list(s.indices) == [2, 5]
    assert np.allclose(s.amplitudes, [1.0, 1.0])


def test_x_flips_a_bit():
    out = apply_pauli_string([(0, "a", "X")], SparseState.basis(16, 0))
    assert list(out.indices) == [1 << qubit_bit(0, "a")]
    assert out.amplitudes[0] == 1


def test_z_on_eigenstate_gives_sign():
    up = SparseState.basis(16, 0)
    down = SparseState.basis(16, 1 << qubit_bit(1, "a"))
    assert apply_pauli_string([(1, "a", "Z")], up).allclose(up)
    assert apply_pauli_string([(1, "a", "Z")], down).allclose(down.scaled(-1))


def test_xy_equals_i_z_on_one_site():
    rng = np.random.default_rng(0)
    psi = random_state(rng, 1)
    xy = apply_pauli_string([(0, "a", "X")], apply_pauli_string([(0, "a", "Y")], psi))
    iz = apply_pauli_string([(0, "a", "Z")], psi).scaled(1j)
    assert xy.allclose(iz)
    # dense oracle on the same site
    ref = (single_qubit("a", "X") @ single_qubit("a", "Y")) @ psi.to_dense()
    assert np.allclose(xy.to_dense(), ref)


@pytest.mark.parametrize("qubit", ["a", "b"])
@pytest.mark.parametrize("pauli", ["X", "Y", "Z"])
def test_pauli_matches_dense_matrix(qubit, pauli):
    rng = np.random.default_rng(1)
    psi = random_state(rng, 3)
    got = apply_pauli_string([(1, qubit, pauli)], psi).to_dense()
    ref = dense_local(3, 1, single_qubit(qubit, pauli)) @ psi.to_dense()
    assert np.allclose(got, ref, atol=1e-12)


def test_pauli_string_errors():
    psi = SparseState.basis(16, 0)
    with pytest.raises(ValueError):
        apply_pauli_string([(2, "a", "X")], psi)
    with pytest.raises(ValueError):
        apply_pauli_string([(0, "a", "X"), (0, "a", "Z")], psi)
    with pytest.raises(ValueError):
        apply_pauli_string([(0, "a", "W")], psi)


pauli_terms = st.lists(
    st.tuples(st.integers(0, 2), st.sampled_from("ab"), st.sampled_from("XYZ")),
    max_size=6, unique_by=lambda t: (t[0], t[1]))


@settings(max_examples=60, deadline=None)
@given(terms=pauli_terms, seed=st.integers(0, 2 ** 32 - 1))
def test_pauli_string_is_involution(terms, seed):
    psi = random_state(np.random.default_rng(seed), 3, nnz=10)
    twice = apply_pauli_string(terms, apply_pauli_string(terms, psi))
    assert twice.allclose(psi, atol=1e-12)


def test_bipartition_examples():
    index = 3 + 4 * 2  # site0 = 3, site1 = 2
    assert bipartition_split(index, 1, 2) == (3, 2)
    assert bipartition_split(index, 0, 2) == (0, index)


@pytest.mark.parametrize("n", [1, 2, 3, 4])
def test_bipartition_bijection(n):
    for n_a in range(n + 1):
        seen = set()
        for index in range(4 ** n):
            row, col = bipartition_split(index, n_a, n)
            assert 0 <= row < 4 ** n_a and 0 <= col < 4 ** (n - n_a)
            assert bipartition_join(row, col, n_a) == index
            seen.add((row, col))
        assert len(seen) == 4 ** n


def test_bipartition_range_errors():
    with pytest.raises(ValueError):
        bipartition_split(0, 4, 3)
    with pytest.raises(ValueError):
        bipartition_split(64, 1, 3)


def test_as_matrix_matches_split():
    rng = np.random.default_rng(2)
    vec = rng.normal(size=64)
    mat = as_matrix(vec, 3, 1)
    for index in range(64):
        assert mat[bipartition_split(index, 1, 3)] == vec[index]
    batch = as_matrix(np.stack([vec, 2 * vec], axis=1), 3, 1)
    assert np.allclose(batch[1], 2 * mat)


@pytest.mark.parametrize("pauli", ["X", "Y", "Z"])
def test_site_sum_operator_is_hermitian_and_sparse(pauli):
    op = site_sum_operator(single_qubit("a", pauli), 3)
    assert op.is_hermitian(1e-12)
    assert op.max_nnz_per_column() <= 3


def test_site_sum_matches_dense():
    local = np.kron(PAULI["X"], PAULI["Y"])
    op = site_sum_operator(local, 3).toarray()
    ref = sum(dense_local(3, j, local) for j in range(3))
    assert np.allclose(op, ref)


def test_apply_local_matches_dense():
    rng = np.random.default_rng(3)
    vecs = rng.normal(size=(64, 5)) + 1j * rng.normal(size=(64, 5))
    local = rng.normal(size=(4, 4))
    got = apply_local(vecs, 2, local).toarray()
    assert np.allclose(got, dense_local(3, 2, local) @ vecs)


def test_operator_arithmetic():
    a = site_sum_operator(single_qubit("a", "Z"), 2)
    b = site_sum_operator(single_qubit("b", "Z"), 2)
    psi = random_state(np.random.default_rng(4), 2)
    lhs = (a + b * 2 - a).apply(psi)
    assert np.allclose(lhs.to_dense(), 2 * b.toarray() @ psi.to_dense())
    assert isinstance(a @ b, SparseOperator)


def test_embed_a_factor_columns():
    n = 2
    a_vecs = np.eye(4)[:, [1, 2]]
    emb = embed_a_factor(a_vecs, n).toarray()
    assert emb.shape == (16, 8)
    # column l * 2^N + beta holds a-state l and b-state beta
    for l, a_state in enumerate((1, 2)):
        for beta in range(4):
            col = emb[:, l * 4 + beta]
            (idx,) = np.nonzero(col)
            a_bits = [(idx[0] >> qubit_bit(k, "a")) & 1 for k in range(n)]
            b_bits = [(idx[0] >> qubit_bit(k, "b")) & 1 for k in range(n)]
            assert a_bits == [(a_state >> k) & 1 for k in range(n)]
            assert b_bits == [(beta >> k) & 1 for k in range(n)]

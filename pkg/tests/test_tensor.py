"""Sparse tensor core against dense oracles and algebraic invariants."""

from __future__ import annotations

import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from photonlab.tensor import (
    PRUNE_EPS,
    Dimension,
    SparseOperator,
    SparseVector,
    inner_product,
    operator_distance,
    partial_inner,
    subsystem_purity,
    tensor_product,
)

from oracles import (
    dense_apply_on_subset,
    dense_operator,
    dense_partial_inner,
    dense_subsystem_purity,
    dense_vector,
    random_sparse_entries,
    random_unitary,
    sizes_of,
)

QUBIT_A = Dimension("a", ("0", "1"))
QUBIT_B = Dimension("b", ("0", "1"))
QUBIT_C = Dimension("c", ("0", "1"))
TRIT = Dimension("t", ("0", "1", "2"))

INV_SQRT2 = 1.0 / math.sqrt(2.0)


def _random_vector(dims, fill, seed):
    rng = np.random.default_rng(seed)
    n = 1
    for d in dims:
        n *= d.size
    return SparseVector(dims, random_sparse_entries(n, fill, rng))


def _op_from_matrix(out_dims, in_dims, mat):
    return SparseOperator.from_matrix(out_dims, in_dims, [list(r) for r in mat])


# -- dimensions and packing ----------------------------------------------------


def test_dimension_key_includes_particle_tag():
    d = Dimension("pol", ("H", "V"))
    assert d.key == "pol"
    assert d.tagged(2).key == "pol@2"
    assert d.tagged(2).compatible(d)


def test_dimension_rejects_duplicate_labels():
    with pytest.raises(ValueError):
        Dimension("bad", ("x", "x"))


@given(st.integers(0, 1), st.integers(0, 2), st.integers(0, 1))
def test_key_roundtrip(ca, ct, cb):
    v = SparseVector((QUBIT_A, TRIT, QUBIT_B))
    key = v.key_of((ca, ct, cb))
    assert v.coords_of(key) == (ca, ct, cb)


def test_duplicate_dimension_keys_rejected():
    with pytest.raises(ValueError):
        SparseVector((QUBIT_A, QUBIT_A))


# -- pruning and hygiene ---------------------------------------------------------


def test_pruning_threshold():
    v = SparseVector((QUBIT_A,), {0: 0.9 * PRUNE_EPS, 1: 1.1 * PRUNE_EPS})
    assert 0 not in v.entries
    assert 1 in v.entries


def test_nonfinite_amplitudes_rejected():
    with pytest.raises(ValueError):
        SparseVector((QUBIT_A,), {0: complex(float("nan"), 0.0)})
    with pytest.raises(ValueError):
        SparseVector((QUBIT_A,), {0: complex(float("inf"), 0.0)})


def test_cancellation_leaves_no_residue():
    v = SparseVector((QUBIT_A,), {0: 1.0, 1: 0.5j})
    w = v + v.scaled(-1.0)
    assert w.is_zero()


# -- tensor product ---------------------------------------------------------------


def test_tensor_product_matches_kron():
    for seed in range(5):
        a = _random_vector((QUBIT_A, TRIT), 0.7, seed)
        b = _random_vector((QUBIT_B,), 0.9, seed + 100)
        got = dense_vector(tensor_product(a, b))
        want = np.kron(dense_vector(a), dense_vector(b))
        np.testing.assert_allclose(got, want, atol=1e-12)


def test_tensor_product_rejects_shared_dimensions():
    a = SparseVector.basis_state((QUBIT_A,), (0,))
    with pytest.raises(ValueError):
        tensor_product(a, a)


def test_tensor_with_scalar_factor():
    scalar = SparseVector((), {0: 0.5j})
    a = SparseVector.basis_state((QUBIT_A,), (1,))
    out = tensor_product(scalar, a)
    assert out.dims == (QUBIT_A,)
    assert out.entries == {1: 0.5j}


# -- inner products ---------------------------------------------------------------


def test_inner_product_matches_dense_vdot():
    for seed in range(5):
        a = _random_vector((QUBIT_A, QUBIT_B), 0.8, seed)
        b = _random_vector((QUBIT_A, QUBIT_B), 0.8, seed + 50)
        want = np.vdot(dense_vector(a), dense_vector(b))
        assert abs(inner_product(a, b) - want) < 1e-12


def test_inner_product_conjugate_symmetry():
    a = _random_vector((TRIT,), 0.9, 7)
    b = _random_vector((TRIT,), 0.9, 8)
    assert abs(inner_product(a, b) - inner_product(b, a).conjugate()) < 1e-12


def test_partial_inner_singlet_frozen():
    # ⟨0|₂ (|01⟩ − |10⟩)/√2 = −|1⟩/√2, frozen from the dense computation.
    a0, a1 = QUBIT_A.tagged(0), QUBIT_A.tagged(1)
    singlet = SparseVector.from_components(
        (a0, a1), {(0, 1): INV_SQRT2, (1, 0): -INV_SQRT2}
    )
    bra = SparseVector.basis_state((a1,), (0,))
    out = partial_inner(bra, singlet)
    assert out.dims == (a0,)
    assert abs(out.entries[1] - (-INV_SQRT2)) < 1e-15
    assert 0 not in out.entries


def test_partial_inner_matches_dense():
    dims = (QUBIT_A, TRIT, QUBIT_B)
    for seed in range(5):
        v = _random_vector(dims, 0.8, seed)
        bra = _random_vector((TRIT, QUBIT_B), 0.9, seed + 31)
        got = partial_inner(bra, v)
        want = dense_partial_inner(
            dense_vector(bra), (3, 2), [1, 2], dense_vector(v), sizes_of(v)
        )
        np.testing.assert_allclose(dense_vector(got), want, atol=1e-12)


def test_partial_inner_recovers_product_factor():
    a = _random_vector((QUBIT_A,), 1.0, 3)
    b = _random_vector((QUBIT_B, TRIT), 0.8, 4)
    prod = tensor_product(a, b)
    out = partial_inner(a, prod)
    want = dense_vector(b) * complex(np.vdot(dense_vector(a), dense_vector(a)))
    np.testing.assert_allclose(dense_vector(out), want, atol=1e-12)


def test_partial_inner_down_to_scalar():
    a = _random_vector((QUBIT_A, QUBIT_B), 1.0, 9)
    out = partial_inner(a, a)
    assert out.dims == ()
    assert abs(out.entries[0] - a.norm_sq()) < 1e-12


# -- purity ------------------------------------------------------------------------


def test_bell_purity_is_half():
    a0, a1 = QUBIT_A.tagged(0), QUBIT_A.tagged(1)
    bell = SparseVector.from_components(
        (a0, a1), {(0, 0): INV_SQRT2, (1, 1): INV_SQRT2}
    )
    assert abs(subsystem_purity(bell, 0) - 0.5) < 1e-12
    assert abs(subsystem_purity(bell, 1) - 0.5) < 1e-12


def test_product_state_purity_is_one():
    a0, a1 = QUBIT_A.tagged(0), QUBIT_B.tagged(1)
    v = SparseVector.from_components((a0, a1), {(0, 1): 1.0})
    assert abs(subsystem_purity(v, 0) - 1.0) < 1e-12


def test_purity_matches_dense_partial_trace():
    a0 = QUBIT_A.tagged(0)
    t1 = TRIT.tagged(1)
    b1 = QUBIT_B.tagged(1)
    for seed in range(6):
        v = _random_vector((a0, t1, b1), 0.9, seed)
        v = v.normalized()
        got = subsystem_purity(v, 1)
        want = dense_subsystem_purity(dense_vector(v), sizes_of(v), [1, 2])
        assert abs(got - want) < 1e-10


def test_purity_requires_normalization():
    a0, a1 = QUBIT_A.tagged(0), QUBIT_A.tagged(1)
    v = SparseVector.from_components((a0, a1), {(0, 0): 2.0})
    with pytest.raises(ValueError):
        subsystem_purity(v, 0)


# -- operator application ------------------------------------------------------------


def test_apply_on_subset_matches_dense():
    dims = (QUBIT_A, TRIT, QUBIT_B)
    rng = np.random.default_rng(42)
    for positions, op_dims in [
        ([0], (QUBIT_A,)),
        ([1], (TRIT,)),
        ([0, 2], (QUBIT_A, QUBIT_B)),
        ([2, 1], (QUBIT_B, TRIT)),
    ]:
        n = 1
        for d in op_dims:
            n *= d.size
        mat = random_unitary(n, rng)
        op = _op_from_matrix(op_dims, op_dims, mat)
        for seed in range(3):
            v = _random_vector(dims, 0.8, seed)
            got = op.apply(v, on=[dims[p].key for p in positions])
            sz = tuple(d.size for d in op_dims)
            want = dense_apply_on_subset(
                mat, sz, sz, positions, dense_vector(v), sizes_of(v)
            )
            np.testing.assert_allclose(dense_vector(got), want, atol=1e-12)


def test_apply_full_space_requires_matching_order():
    x = SparseOperator.from_matrix((QUBIT_A,), (QUBIT_A,), [[0, 1], [1, 0]])
    v = SparseVector.basis_state((QUBIT_A,), (0,))
    out = x.apply(v)
    assert out.entries == {1: (1 + 0j)}


def test_apply_rejects_incompatible_dimension():
    other = Dimension("a", ("x", "y"))  # same name, different labels
    op = SparseOperator.identity((other,))
    v = SparseVector.basis_state((QUBIT_A,), (0,))
    with pytest.raises(ValueError):
        op.apply(v, on=("a",))


def test_apply_missing_target_errors():
    op = SparseOperator.identity((QUBIT_A,))
    v = SparseVector.basis_state((QUBIT_B,), (0,))
    with pytest.raises(KeyError):
        op.apply(v, on=("a",))


def test_apply_relabels_on_basis_change():
    da = Dimension("a", ("d", "a"))
    op = _op_from_matrix(
        (da,), (QUBIT_A,), [[INV_SQRT2, INV_SQRT2], [INV_SQRT2, -INV_SQRT2]]
    )
    v = SparseVector.basis_state((QUBIT_A.tagged(1), QUBIT_B.tagged(2)), (0, 1))
    out = op.apply(v, on=("a@1",))
    assert out.dims[0].labels == ("d", "a")
    assert out.dims[0].particle == 1


def test_norm_preserved_by_random_unitaries():
    rng = np.random.default_rng(7)
    dims = (QUBIT_A, TRIT, QUBIT_B)
    for seed in range(8):
        mat = random_unitary(6, rng)
        op = _op_from_matrix((QUBIT_A, TRIT), (QUBIT_A, TRIT), mat)
        v = _random_vector(dims, 0.7, seed)
        out = op.apply(v, on=("a", "t"))
        assert abs(out.norm() - v.norm()) < 1e-10


# -- operator algebra ------------------------------------------------------------------


def test_compose_matches_dense_matmul():
    rng = np.random.default_rng(3)
    a = random_unitary(3, rng)
    b = random_unitary(3, rng)
    oa = _op_from_matrix((TRIT,), (TRIT,), a)
    ob = _op_from_matrix((TRIT,), (TRIT,), b)
    np.testing.assert_allclose(dense_operator(oa @ ob), a @ b, atol=1e-12)


def test_compose_associativity():
    rng = np.random.default_rng(11)
    ops = [_op_from_matrix((TRIT,), (TRIT,), random_unitary(3, rng)) for _ in range(3)]
    left = (ops[0] @ ops[1]) @ ops[2]
    right = ops[0] @ (ops[1] @ ops[2])
    assert operator_distance(left, right) < 1e-12


def test_dagger_is_involution_and_conjugate_transpose():
    rng = np.random.default_rng(5)
    mat = rng.normal(size=(3, 3)) + 1j * rng.normal(size=(3, 3))
    op = _op_from_matrix((TRIT,), (TRIT,), mat)
    np.testing.assert_allclose(dense_operator(op.dagger()), mat.conjugate().T, atol=1e-12)
    assert operator_distance(op.dagger().dagger(), op) == 0.0


def test_operator_tensor_matches_kron():
    rng = np.random.default_rng(9)
    a = random_unitary(2, rng)
    b = random_unitary(3, rng)
    oa = _op_from_matrix((QUBIT_A,), (QUBIT_A,), a)
    ob = _op_from_matrix((TRIT,), (TRIT,), b)
    np.testing.assert_allclose(dense_operator(oa.tensor(ob)), np.kron(a, b), atol=1e-12)


def test_operator_add_and_scale():
    x = _op_from_matrix((QUBIT_A,), (QUBIT_A,), [[0, 1], [1, 0]])
    ident = SparseOperator.identity((QUBIT_A,))
    combo = ident + x.scaled(2.0)
    np.testing.assert_allclose(dense_operator(combo), [[1, 2], [2, 1]], atol=1e-15)


def test_unitarity_defect():
    assert SparseOperator.identity((TRIT,)).unitarity_defect() < 1e-15
    lossy = SparseOperator.identity((TRIT,)).scaled(0.5)
    assert abs(lossy.unitarity_defect() - 0.75) < 1e-12
    rng = np.random.default_rng(13)
    u = _op_from_matrix((TRIT,), (TRIT,), random_unitary(3, rng))
    assert u.is_unitary(1e-10)


@settings(max_examples=40)
@given(st.integers(0, 10_000))
def test_unitary_preserves_norm_property(seed):
    rng = np.random.default_rng(seed)
    mat = random_unitary(4, rng)
    op = _op_from_matrix((QUBIT_A, QUBIT_B), (QUBIT_A, QUBIT_B), mat)
    v = SparseVector(
        (QUBIT_A, QUBIT_B), random_sparse_entries(4, 0.8, rng)
    )
    assert abs(op.apply(v).norm() - v.norm()) < 1e-10

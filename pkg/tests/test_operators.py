import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from lgspin.operators import (DickeSpace, FullSpace, check_density_matrix,
                              collective_operators, full_space_operators,
                              initial_state, is_hermitian, jz_eigenprojectors,
                              symmetric_isometry, weight_index_groups)


def test_dicke_space_fields():
    space = DickeSpace(5)
    assert space.j == 2.5
    assert space.dim == 6
    assert np.allclose(space.m_values, [-2.5, -1.5, -0.5, 0.5, 1.5, 2.5])
    assert np.all(np.diff(space.m_values) == 1.0)


def test_rejects_empty_ensemble():
    with pytest.raises(ValueError):
        DickeSpace(0)
    with pytest.raises(ValueError):
        FullSpace(0)


def test_full_space_cap():
    with pytest.raises(ValueError, match="cap"):
        FullSpace(13)
    assert FullSpace(13, cap=13).dim == 2 ** 13


def test_single_qubit_operators():
    ops = collective_operators(DickeSpace(1))
    assert np.allclose(ops["jz"], np.diag([-0.5, 0.5]))
    assert np.allclose(ops["jx"], [[0, 0.5], [0.5, 0]])


def test_two_qubit_ladder():
    ops = collective_operators(DickeSpace(2))
    assert np.allclose(np.diag(ops["jz"]), [-1, 0, 1])
    # <m-1|J-|m> = sqrt(j(j+1) - m(m-1)) sits on the superdiagonal
    assert np.allclose(np.diag(ops["jminus"], k=1), [np.sqrt(2), np.sqrt(2)])


@given(n=st.integers(1, 10))
@settings(max_examples=30, deadline=None)
def test_su2_algebra(n):
    ops = collective_operators(DickeSpace(n))
    jx, jy, jz = ops["jx"], ops["jy"], ops["jz"]
    for a, b, c in ((jx, jy, jz), (jy, jz, jx), (jz, jx, jy)):
        assert np.max(np.abs(a @ b - b @ a - 1j * c)) < 1e-12


@given(n=st.integers(1, 10))
@settings(max_examples=30, deadline=None)
def test_casimir(n):
    space = DickeSpace(n)
    ops = collective_operators(space)
    total = sum(o @ o for o in (ops["jx"], ops["jy"], ops["jz"]))
    j = space.j
    assert np.max(np.abs(total - j * (j + 1) * np.eye(space.dim))) < 1e-12


def test_full_space_jz_spectrum():
    ops = full_space_operators(FullSpace(2))
    vals = np.sort(np.diag(ops["jz"].toarray()).real)
    assert np.allclose(vals, [-1, 0, 0, 1])


def test_full_equals_dicke_at_n1():
    full = full_space_operators(FullSpace(1))
    dicke = collective_operators(DickeSpace(1))
    for key in ("jx", "jz", "jminus"):
        assert np.allclose(full[key].toarray(), dicke[key])


@pytest.mark.parametrize("n", [2, 3, 5])
def test_symmetric_isometry_reduces_collective_ops(n):
    v = symmetric_isometry(n)
    assert np.allclose(v.T @ v, np.eye(n + 1))
    full = full_space_operators(FullSpace(n))
    dicke = collective_operators(DickeSpace(n))
    for key in ("jx", "jz", "jminus"):
        assert np.max(np.abs(v.T @ (full[key] @ v) - dicke[key])) < 1e-12


def test_initial_state_polarized():
    rho = initial_state(DickeSpace(4))
    check_density_matrix(rho)
    assert rho[-1, -1] == 1.0  # m = +j occupies the last ascending-m index
    ops = collective_operators(DickeSpace(4))
    assert np.isclose(np.trace(ops["jz"] @ rho).real, 2.0)

    rho_full = initial_state(FullSpace(3))
    ops_full = full_space_operators(FullSpace(3))
    assert np.isclose(np.trace(ops_full["jz"] @ rho_full).real, 1.5)


def test_weight_groups_partition():
    space = FullSpace(4)
    groups = weight_index_groups(space)
    assert [len(g) for g in groups] == [1, 4, 6, 4, 1]
    assert sorted(np.concatenate(groups)) == list(range(16))


@pytest.mark.parametrize("space", [DickeSpace(5), FullSpace(4)])
def test_projector_completeness(space):
    projs = jz_eigenprojectors(space)
    total = sum(p.toarray() if hasattr(p, "toarray") else p
                for p in projs.values())
    assert np.max(np.abs(total - np.eye(space.dim))) < 1e-14
    for m, p in projs.items():
        p = p.toarray() if hasattr(p, "toarray") else p
        assert np.max(np.abs(p @ p - p)) < 1e-14


def test_density_matrix_checks():
    assert is_hermitian(np.eye(2))
    assert not is_hermitian(np.array([[0, 1], [0, 0]]))
    with pytest.raises(ValueError, match="trace"):
        check_density_matrix(np.eye(2))
    with pytest.raises(ValueError, match="Hermitian"):
        check_density_matrix(np.array([[1, 0.1], [0, 0]], dtype=complex))
    with pytest.raises(ValueError, match="eigenvalue"):
        check_density_matrix(np.diag([1.5, -0.5]).astype(complex))

import numpy as np
import pytest
import scipy.linalg as sla
from hypothesis import given, settings
from hypothesis import strategies as st

from lgspin.operators import DickeSpace, collective_operators
from lgspin.wigner import (element_from_bottom, element_from_top, small_d,
                           transition_probability_matrix)


def d_matrix(j, beta):
    dim = int(round(2 * j)) + 1
    ms = np.arange(dim) - j
    return np.array([[small_d(j, mf, mt, beta) for mf in ms] for mt in ms])


def test_spin_half_elements():
    beta = 0.73
    d = d_matrix(0.5, beta)
    # exp(-i sigma_y beta / 2) in the ascending-m basis (|-1/2>, |+1/2>)
    ref = np.array([[np.cos(beta / 2), np.sin(beta / 2)],
                    [-np.sin(beta / 2), np.cos(beta / 2)]])
    assert np.allclose(d, ref)


@pytest.mark.parametrize("j", [0.5, 1, 2.5, 7])
def test_matches_expm_oracle(j):
    n = int(round(2 * j))
    jy = collective_operators(DickeSpace(n))["jy"]
    for beta in (0.4, 1.3, 2.9):
        u = sla.expm(-1j * beta * jy)
        assert np.max(np.abs(d_matrix(j, beta) - u.real)) < 1e-12
        assert np.max(np.abs(u.imag)) < 1e-12


@given(two_j=st.integers(1, 25), beta=st.floats(0.01, 3.1))
@settings(max_examples=60, deadline=None)
def test_orthogonality(two_j, beta):
    d = d_matrix(two_j / 2, beta)
    assert np.max(np.abs(d @ d.T - np.eye(two_j + 1))) < 1e-10


@given(two_j=st.integers(1, 20), beta=st.floats(0.01, 3.1))
@settings(max_examples=40, deadline=None)
def test_transposition_sign(two_j, beta):
    j = two_j / 2
    ms = np.arange(two_j + 1) - j
    for mf in ms[::2]:
        for mt in ms[::2]:
            sign = (-1.0) ** int(round(mf - mt))
            assert np.isclose(small_d(j, mf, mt, beta),
                              sign * small_d(j, mt, mf, beta), atol=1e-12)


def test_large_j_path():
    # j = 60 goes through the Jy-eigensystem path; orthogonality is the
    # sharp probe (the raw factorial sum loses all precision up here)
    d = d_matrix(60, 1.1)
    assert np.max(np.abs(d @ d.T - np.eye(121))) < 1e-12
    # known endpoint element: d_{j,j} = cos(beta/2)^(2j)
    assert np.isclose(small_d(60, 60, 60, 0.3), np.cos(0.15) ** 120, rtol=1e-11)
    with pytest.raises(ValueError, match="analytic cap"):
        small_d(501, 0, 0, 0.5)


def test_paths_agree_at_the_switchover():
    # j = 39.5 (direct sum) against the eigensystem construction used above
    from lgspin.wigner import _d_matrix_large
    # the alternating sum keeps ~8 digits this close to the switchover
    direct = d_matrix(39.5, 0.9)
    assert np.max(np.abs(direct - _d_matrix_large(79, 0.9))) < 1e-7


def test_ladder_validation():
    with pytest.raises(ValueError):
        small_d(-1, 0, 0, 0.5)
    with pytest.raises(ValueError):
        small_d(1, 2, 0, 0.5)
    with pytest.raises(ValueError):
        small_d(1, 0.5, 0, 0.5)
    with pytest.raises(ValueError):
        transition_probability_matrix(501, 0.5)


@pytest.mark.parametrize("j", [0.5, 2, 6.5])
def test_transition_matrix_vs_expm(j):
    n = int(round(2 * j))
    jx = collective_operators(DickeSpace(n))["jx"]
    for theta in (0.6, 1.9):
        p = transition_probability_matrix(j, theta)
        assert np.max(np.abs(p - np.abs(sla.expm(-1j * theta * jx)) ** 2)) < 1e-12


@given(two_j=st.integers(1, 30), theta=st.floats(0.01, 3.1))
@settings(max_examples=40, deadline=None)
def test_transition_matrix_doubly_stochastic(two_j, theta):
    p = transition_probability_matrix(two_j / 2, theta)
    assert np.all(p >= 0)
    assert np.max(np.abs(p.sum(axis=0) - 1)) < 1e-10
    assert np.max(np.abs(p.sum(axis=1) - 1)) < 1e-10


def test_extreme_row_elements():
    j, theta = 8.5, 1.2
    p = transition_probability_matrix(j, theta)
    ms = np.arange(int(round(2 * j)) + 1) - j
    for i, m in enumerate(ms):
        assert np.isclose(element_from_top(j, m, theta), p[i, -1], atol=1e-13)
        assert np.isclose(element_from_bottom(j, m, theta), p[i, 0], atol=1e-13)
    # large j stays finite in log space
    assert element_from_top(500, 0, 0.9) >= 0

# Closed-form Wigner small-d rotation matrix elements and the squared
# transition elements of exp(-i Jx theta) between Jz eigenstates.
#
# d(j)_{m,m'}(beta) = <j,m'| exp(-i Jy beta) |j,m>.  For j below the direct
# cap the factorial sum is evaluated term by term; beyond it the alternating
# sum cancels catastrophically (the result can be ~1e-20 of the largest
# term), so the matrix is built from the exact Jy eigensystem instead, which
# keeps orthogonality at machine precision up to the analytic cap.  The
# single-column extreme elements avoid the sum entirely and stay in log
# space, usable for j ~ 1e6.  Only beta-rotations are exposed: every
# quantity downstream uses |d|^2, where the z-rotation phases cancel.

from functools import lru_cache
from math import factorial, lgamma

import numpy as np

ANALYTIC_J_CAP = 500

# below this j the factorial products stay far from float overflow and the
# alternating sum still carries enough significant digits
_DIRECT_J_MAX = 40


@lru_cache(maxsize=8)
def _jy_eigensystem(two_j):
    j = two_j / 2
    m = np.arange(two_j + 1) - j
    lower = np.sqrt(j * (j + 1) - m[1:] * (m[1:] - 1))
    jm = np.diag(lower, k=1).astype(complex)
    jy = (jm.conj().T - jm) / 2j
    w, v = np.linalg.eigh(jy)
    return w, v


@lru_cache(maxsize=16)
def _d_matrix_large(two_j, beta):
    """Full d-matrix exp(-i Jy beta) from the Jy eigensystem (real output)."""
    w, v = _jy_eigensystem(two_j)
    d = (v * np.exp(-1j * beta * w)) @ v.conj().T
    return d.real


def _check_ladder(j, *ms):
    if j < 0:
        raise ValueError(f"j must be non-negative, got {j}")
    if abs(2 * j - round(2 * j)) > 1e-9:
        raise ValueError(f"j must be integer or half-integer, got {j}")
    for m in ms:
        if abs(m) > j + 1e-9:
            raise ValueError(f"|m|={abs(m)} exceeds j={j}")
        if abs((j - m) - round(j - m)) > 1e-9:
            raise ValueError(f"m={m} is not on the half-integer ladder of j={j}")


def _lf(n):
    return lgamma(n + 1)


def small_d(j, m_from, m_to, beta):
    """<j, m_to| exp(-i Jy beta) |j, m_from>."""
    _check_ladder(j, m_from, m_to)
    if j >= _DIRECT_J_MAX:
        if j > ANALYTIC_J_CAP:
            raise ValueError(f"j={j} exceeds the analytic cap {ANALYTIC_J_CAP}")
        two_j = int(round(2 * j))
        d = _d_matrix_large(two_j, float(beta))
        return float(d[int(round(m_to + j)), int(round(m_from + j))])
    m, mp = m_from, m_to
    k_lo = int(round(max(0, m - mp)))
    k_hi = int(round(min(j - mp, j + m)))
    if k_hi < k_lo:
        return 0.0
    c = np.cos(beta / 2)
    s = np.sin(beta / 2)
    ks = np.arange(k_lo, k_hi + 1)
    signs = np.where((ks - round(m - mp)) % 2 == 0, 1.0, -1.0)
    cos_pow = (2 * j - 2 * ks + m - mp).round().astype(int)
    sin_pow = (2 * ks - m + mp).round().astype(int)

    num = np.sqrt(float(
        factorial(int(round(j + m))) * factorial(int(round(j - m)))
        * factorial(int(round(j + mp))) * factorial(int(round(j - mp)))
    ))
    terms = np.array([
        num / (factorial(int(round(j + m - k))) * factorial(int(k))
               * factorial(int(round(j - k - mp)))
               * factorial(int(round(k - m + mp))))
        for k in ks
    ])
    return float(np.sum(signs * terms * _safe_pow(c, cos_pow)
                        * _safe_pow(s, sin_pow)))


def _safe_pow(base, powers):
    """base**powers with the 0**0 = 1 convention."""
    out = np.where(powers == 0, 1.0, float(base) ** powers)
    return out


def _safe_pow_log(base, powers):
    """log(|base|**powers), with 0**0 = 1, as -inf when the result is 0."""
    powers = np.asarray(powers, dtype=float)
    if base == 0:
        return np.where(powers == 0, 0.0, -np.inf)
    return powers * np.log(abs(base))


def element_from_top(j, m, theta):
    """|<m| exp(-i Jx theta) |j>|^2 = C(2j, j+m) cos^(2(j+m)) sin^(2(j-m))."""
    _check_ladder(j, m)
    log_binom = _lf(2 * j) - _lf(j + m) - _lf(j - m)
    c = np.cos(theta / 2)
    s = np.sin(theta / 2)
    log_c = _safe_pow_log(c, np.array(2 * (j + m)))
    log_s = _safe_pow_log(s, np.array(2 * (j - m)))
    total = log_binom + log_c + log_s
    return float(np.exp(total)) if total > -np.inf else 0.0


def element_from_bottom(j, m, theta):
    """|<m| exp(-i Jx theta) |-j>|^2, mirror of element_from_top."""
    return element_from_top(j, -m, theta)


def transition_probability_matrix(j, theta, j_cap=ANALYTIC_J_CAP):
    """Doubly-stochastic matrix P[i_m, i_n] = |<m| exp(-i Jx theta) |n>|^2.

    Indices follow the ascending-m Dicke ordering. |<m|exp(-iJx theta)|n>| =
    |d(j)_{n,m}(theta)| after decomposing the x-rotation into z- and
    y-rotations.
    """
    _check_ladder(j)
    if j > j_cap:
        raise ValueError(f"j={j} exceeds the analytic cap {j_cap}")
    dim = int(round(2 * j)) + 1
    ms = np.arange(dim) - j
    p = np.zeros((dim, dim))
    for a in range(dim):
        for b in range(a, dim):
            val = small_d(j, ms[b], ms[a], theta) ** 2
            p[a, b] = val
            p[b, a] = val  # d_{m',m} = (-1)^(m-m') d_{m,m'}
    return p

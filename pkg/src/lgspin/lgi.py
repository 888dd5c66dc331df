# Two-time correlation functions, the Leggett-Garg parameter
# K = C21 + C32 - C31 for measurements at t1 = 0, t2 = tau, t3 = 2 tau,
# and the closed-form noise-free expressions used as oracles.
#
# The protocol: the initial state is the m = +j eigenstate, which is a
# binning eigenstate (q = +1) of every scheme, so the t1 measurement is
# non-disturbing and C21, C31 reduce to a single weighted update at t = 0.
# C32 measures at t2 and propagates the q-weighted operator to t3.
#
# Two evaluation paths:
#   * noise-free Dicke dynamics uses the exact rotation exp(-i Omega Jx t)
#     (cheap per tau, from the cached Jx eigensystem);
#   * anything else integrates the master equation.  Full curves integrate
#     the state forward once and the q-observable backwards (Heisenberg
#     picture) once, so a whole tau grid costs two integrator passes.

import warnings
from dataclasses import dataclass, field

import numpy as np

from .dynamics import (DEFAULT_ATOL, DEFAULT_RTOL, NoiseParams, propagate,
                       propagate_grid, propagate_stack, unitary_propagator)
from .measurement import MeasurementScheme, q_diagonal, weighted_update

IMAG_RESIDUE_TOL = 1e-8

# the noise-free dynamics is 2 pi periodic in Omega tau and every maximum
# reported by the model sits at or below Omega tau = pi/2
OMEGA_TAU_MAX = np.pi


class GridEdgeWarning(UserWarning):
    """The K maximum sat on the edge of the search grid."""


@dataclass
class LGCurve:
    scheme: str
    n_qubits: int
    noise: NoiseParams
    backend: str
    omega_tau: np.ndarray
    k: np.ndarray
    c21: np.ndarray
    c32: np.ndarray
    c31: np.ndarray
    k_max: float = field(default=np.nan)
    omega_tau_max: float = field(default=np.nan)


def _real_trace(qdiag, op):
    """tr(Q op) for diagonal Q, aborting on a non-negligible imaginary part."""
    val = complex(np.sum(qdiag * np.diag(op)))
    if abs(val.imag) > IMAG_RESIDUE_TOL:
        raise RuntimeError(
            f"correlator has imaginary residue {val.imag:.3e}; "
            "generator or measurement update is inconsistent"
        )
    return val.real


def _use_unitary(gen, method):
    if method == "auto":
        return gen.is_unitary and gen.backend == "dicke"
    if method == "unitary":
        if not (gen.is_unitary and gen.backend == "dicke"):
            raise ValueError("unitary path needs a noise-free Dicke generator")
        return True
    if method == "integrate":
        return False
    raise ValueError(f"unknown method {method!r}")


def _evolve(gen, a, duration, unitary, rtol, atol):
    if duration == 0:
        return np.array(a, dtype=complex, copy=True)
    if unitary:
        u = unitary_propagator(gen.space, gen.omega, duration)
        return u @ a @ u.conj().T
    return propagate(gen, a, duration, rtol=rtol, atol=atol)


def correlation(scheme, gen, rho0, t_a, t_b, method="auto",
                rtol=DEFAULT_RTOL, atol=DEFAULT_ATOL):
    """<Q(t_b) Q(t_a)> for a measurement pair at 0 <= t_a < t_b."""
    if not 0 <= t_a < t_b:
        raise ValueError(f"need 0 <= t_a < t_b, got ({t_a}, {t_b})")
    unitary = _use_unitary(gen, method)
    rho_a = _evolve(gen, rho0, t_a, unitary, rtol, atol)
    a = weighted_update(scheme, gen.space, rho_a)
    b = _evolve(gen, a, t_b - t_a, unitary, rtol, atol)
    return _real_trace(q_diagonal(scheme, gen.space), b)


def k_parameter(scheme, gen, rho0, tau, method="auto",
                rtol=DEFAULT_RTOL, atol=DEFAULT_ATOL):
    """K(tau) = C21 + C32 - C31 at measurement interval tau."""
    if tau <= 0:
        raise ValueError(f"tau must be positive, got {tau}")
    if _use_unitary(gen, method):
        kw = dict(method=method, rtol=rtol, atol=atol)
        c21 = correlation(scheme, gen, rho0, 0.0, tau, **kw)
        c32 = correlation(scheme, gen, rho0, tau, 2 * tau, **kw)
        c31 = correlation(scheme, gen, rho0, 0.0, 2 * tau, **kw)
        return c21 + c32 - c31
    # integrated path: co-propagate the state and the t1-measured operator
    # to tau, then the t1- and t2-measured operators to 2 tau (two passes)
    qdiag = q_diagonal(scheme, gen.space)
    a0 = weighted_update(scheme, gen.space, rho0)
    rho_tau, a0_tau = propagate_stack(gen, [rho0, a0], tau, rtol, atol)
    a2 = weighted_update(scheme, gen.space, rho_tau)
    a0_2tau, a2_2tau = propagate_stack(gen, [a0_tau, a2], tau, rtol, atol)
    c21 = _real_trace(qdiag, a0_tau)
    c32 = _real_trace(qdiag, a2_2tau)
    c31 = _real_trace(qdiag, a0_2tau)
    return c21 + c32 - c31


def _correlators_on_grid(scheme, gen, rho0, grid, method, rtol, atol):
    """(C21, C32, C31) arrays over an ascending tau grid."""
    qdiag = q_diagonal(scheme, gen.space)
    a0 = weighted_update(scheme, gen.space, rho0)
    if _use_unitary(gen, method):
        c21 = np.empty(grid.size)
        c32 = np.empty(grid.size)
        c31 = np.empty(grid.size)
        for i, tau in enumerate(grid):
            u = unitary_propagator(gen.space, gen.omega, tau)
            rho_t = u @ rho0 @ u.conj().T
            a2 = weighted_update(scheme, gen.space, rho_t)
            c21[i] = _real_trace(qdiag, u @ a0 @ u.conj().T)
            c32[i] = _real_trace(qdiag, u @ a2 @ u.conj().T)
            u2 = unitary_propagator(gen.space, gen.omega, 2 * tau)
            c31[i] = _real_trace(qdiag, u2 @ a0 @ u2.conj().T)
        return c21, c32, c31

    # Heisenberg picture: one forward pass for rho(tau), one adjoint pass
    # for Q(t) on the union of {tau} and {2 tau}
    q_op = np.diag(qdiag).astype(complex)
    t_all = np.unique(np.concatenate([grid, 2 * grid]))
    rho_t = propagate_grid(gen, rho0, grid, rtol=rtol, atol=atol)
    q_t = propagate_grid(gen, q_op, t_all, adjoint=True, rtol=rtol, atol=atol)
    pos = np.searchsorted(t_all, grid)
    pos2 = np.searchsorted(t_all, 2 * grid)
    c21 = np.empty(grid.size)
    c32 = np.empty(grid.size)
    c31 = np.empty(grid.size)
    for i in range(grid.size):
        qh_tau = q_t[pos[i]]
        c21[i] = _trace_pair(qh_tau, a0)
        c32[i] = _trace_pair(qh_tau, weighted_update(scheme, gen.space, rho_t[i]))
        c31[i] = _trace_pair(q_t[pos2[i]], a0)
    return c21, c32, c31


def _trace_pair(x, y):
    val = complex(np.sum(x * y.T))
    if abs(val.imag) > IMAG_RESIDUE_TOL:
        raise RuntimeError(
            f"correlator has imaginary residue {val.imag:.3e}; "
            "generator or measurement update is inconsistent"
        )
    return val.real


def default_grid_points(n_qubits, grid_points=None):
    """Grid density for the K_max search; the violation window narrows with N."""
    if grid_points is not None:
        if grid_points < 64:
            raise ValueError(f"grid_points must be >= 64, got {grid_points}")
        return grid_points
    return max(2000, 20 * n_qubits)


def omega_tau_grid(grid_points):
    return np.linspace(0.0, OMEGA_TAU_MAX, grid_points + 1)[1:]


def _golden_max(f, a, b, tol):
    """Golden-section maximization on [a, b] to |b - a| < tol."""
    inv_phi = (np.sqrt(5) - 1) / 2
    x1 = b - inv_phi * (b - a)
    x2 = a + inv_phi * (b - a)
    f1, f2 = f(x1), f(x2)
    while b - a > tol:
        if f1 < f2:
            a, x1, f1 = x1, x2, f2
            x2 = a + inv_phi * (b - a)
            f2 = f(x2)
        else:
            b, x2, f2 = x2, x1, f1
            x1 = b - inv_phi * (b - a)
            f1 = f(x1)
    x = (a + b) / 2
    return f(x), x


def k_max_search(scheme, gen, rho0, grid_points=None, refine_tol=1e-6,
                 method="auto", rtol=DEFAULT_RTOL, atol=DEFAULT_ATOL):
    """(K_max, Omega tau at the maximum), grid scan plus golden refinement."""
    gp = default_grid_points(gen.space.n_qubits, grid_points)
    grid = omega_tau_grid(gp)
    c21, c32, c31 = _correlators_on_grid(scheme, gen, rho0, grid, method,
                                         rtol, atol)
    k = c21 + c32 - c31
    i = int(np.argmax(k))
    if i == 0 or i == grid.size - 1:
        warnings.warn(
            f"K maximum sits at the grid edge (Omega tau = {grid[i]:.4g})",
            GridEdgeWarning,
        )
    lo = grid[max(i - 1, 0)]
    hi = grid[min(i + 1, grid.size - 1)]
    if hi - lo < refine_tol:
        return float(k[i]), float(grid[i])

    def f(tau):
        return k_parameter(scheme, gen, rho0, tau, method=method,
                           rtol=rtol, atol=atol)

    k_ref, tau_ref = _golden_max(f, lo, hi, refine_tol)
    if k_ref >= k[i]:
        return float(k_ref), float(tau_ref)
    return float(k[i]), float(grid[i])


def k_curve(scheme, gen, rho0, grid=None, grid_points=None, refine_tol=1e-6,
            method="auto", rtol=DEFAULT_RTOL, atol=DEFAULT_ATOL):
    """Full sampled K(tau) curve with the located maximum."""
    if grid is None:
        grid = omega_tau_grid(default_grid_points(gen.space.n_qubits,
                                                  grid_points))
    grid = np.asarray(grid, dtype=float)
    if grid.size == 0 or np.any(np.diff(grid) <= 0) or grid[0] <= 0:
        raise ValueError("omega_tau grid must be strictly increasing and > 0")
    c21, c32, c31 = _correlators_on_grid(scheme, gen, rho0, grid, method,
                                         rtol, atol)
    k = c21 + c32 - c31
    k_max, tau_max = k_max_search(scheme, gen, rho0,
                                  grid_points=max(grid.size, 64),
                                  refine_tol=refine_tol, method=method,
                                  rtol=rtol, atol=atol)
    return LGCurve(scheme=scheme.id, n_qubits=gen.space.n_qubits,
                   noise=gen.noise, backend=gen.backend,
                   omega_tau=grid, k=k, c21=c21, c32=c32, c31=c31,
                   k_max=k_max, omega_tau_max=tau_max)


def _even_power(base, exponent):
    """|base|**exponent for even integer exponents, stable for huge exponents."""
    base = np.abs(np.asarray(base, dtype=float))
    with np.errstate(divide="ignore"):
        out = np.exp(exponent * np.log(np.where(base > 0, base, 1.0)))
    return np.where(base > 0, out, np.where(exponent == 0, 1.0, 0.0))


def k_extreme_closed_form(j, omega_tau):
    """Closed-form noise-free K(tau) for the extreme-states scheme.

    All exponents 4j, 8j are even integers, so every power is computed from
    log|base| and the formula stays usable up to j ~ 1e6.
    """
    x = np.asarray(omega_tau, dtype=float)
    c = np.cos(x / 2)
    s = np.sin(x / 2)
    c2 = np.cos(x)
    s2 = np.sin(x)
    k = (_even_power(c, 4 * j) - _even_power(s, 4 * j)
         + _even_power(c, 8 * j) - _even_power(s, 8 * j)
         - _even_power(c2, 4 * j) + _even_power(s2, 4 * j))
    return k if k.shape else float(k)


def k_extreme_max(j, refine_tol=1e-9):
    """Maximum of the extreme-states closed form over Omega tau in (0, pi]."""
    # the maximum migrates toward 0 like 1/sqrt(j); sample both scales
    coarse = np.linspace(0, OMEGA_TAU_MAX, 4001)[1:]
    fine = np.geomspace(min(1e-3 / np.sqrt(j), 1e-3), OMEGA_TAU_MAX, 4000)
    grid = np.unique(np.concatenate([coarse, fine]))
    k = k_extreme_closed_form(j, grid)
    i = int(np.argmax(k))
    lo = grid[max(i - 1, 0)]
    hi = grid[min(i + 1, grid.size - 1)]
    k_ref, tau_ref = _golden_max(lambda x: k_extreme_closed_form(j, x),
                                 lo, hi, refine_tol)
    if k_ref >= k[i]:
        return float(k_ref), float(tau_ref)
    return float(k[i]), float(grid[i])


def k_single_state_asymptote(j):
    """Large-spin K_max for single-state binning: 3 - sqrt(2/(pi j))."""
    if j < 0.5:
        raise ValueError(f"j must be >= 1/2, got {j}")
    return 3.0 - np.sqrt(2.0 / (np.pi * j))

# Lindblad generator for the driven ensemble and operator propagation.
#
# The master equation is
#   rho_dot = -i[Omega Jx, rho] + 2 Gamma_d L[Jz] + Gamma_l L[J-]
#             + sum_k ( gamma_d/2 L[sigma_z^k] + gamma_l L[sigma_-^k] ),
# with L[a]rho = a rho a^dag - {a^dag a, rho}/2.  The per-qubit channels only
# exist on the full backend; the Dicke backend rejects them because they break
# the symmetric subspace.  All rates and times are in units of Omega
# (Omega = 1 internally).
#
# Propagation integrates A_dot = M[A] directly with an adaptive embedded
# Runge-Kutta pair (DOP853) instead of exponentiating the dense superoperator,
# so the cost per step stays at a handful of dim x dim products.  The input
# may be any operator, not just a state: correlation functions propagate
# non-Hermitian q-weighted operators through the same generator.

from dataclasses import dataclass
from functools import lru_cache

import numpy as np
import scipy.sparse as sp
from scipy.integrate import solve_ivp

from .operators import DickeSpace, collective_operators, full_space_operators

DEFAULT_RTOL = 1e-10
DEFAULT_ATOL = 1e-12


class IntegrationError(RuntimeError):
    """Adaptive integration failed before reaching the requested time."""


@dataclass(frozen=True)
class NoiseParams:
    """Dephasing/dissipation rates in units of Omega.

    gamma_d, gamma_l are per-qubit rates; Gamma_d, Gamma_l are collective.
    """

    gamma_d: float = 0.0
    gamma_l: float = 0.0
    Gamma_d: float = 0.0
    Gamma_l: float = 0.0

    def __post_init__(self):
        for name in ("gamma_d", "gamma_l", "Gamma_d", "Gamma_l"):
            rate = getattr(self, name)
            if not np.isfinite(rate) or rate < 0:
                raise ValueError(f"{name}={rate} must be finite and >= 0")

    @property
    def has_individual(self):
        return self.gamma_d > 0 or self.gamma_l > 0

    @property
    def is_noise_free(self):
        return (self.gamma_d == self.gamma_l
                == self.Gamma_d == self.Gamma_l == 0)


class Generator:
    """Lindblad generator M with forward and adjoint (Heisenberg) action."""

    def __init__(self, space, hamiltonian, collapse_ops, noise, omega):
        self.space = space
        self.backend = space.basis
        self.noise = noise
        self.omega = omega
        self.hamiltonian = hamiltonian
        self.collapse_ops = list(collapse_ops)  # (operator, rate) pairs
        self._ch = [(c, c.conj().T, (c.conj().T @ c), rate)
                    for c, rate in self.collapse_ops]

    @property
    def dim(self):
        return self.space.dim

    @property
    def is_unitary(self):
        return not self.collapse_ops

    def apply(self, a):
        """M[a] = -i[H, a] + dissipators."""
        h = self.hamiltonian
        out = -1j * (h @ a - a @ h)
        for c, cdag, cdagc, rate in self._ch:
            out += rate * (c @ a @ cdag - 0.5 * (cdagc @ a + a @ cdagc))
        return out

    def apply_adjoint(self, a):
        """Heisenberg-picture generator: tr(Q M[A]) = tr(M_adj[Q] A)."""
        h = self.hamiltonian
        out = 1j * (h @ a - a @ h)
        for c, cdag, cdagc, rate in self._ch:
            out += rate * (cdag @ a @ c - 0.5 * (cdagc @ a + a @ cdagc))
        return out


def build_generator(space, noise, omega=1.0):
    """Assemble the generator for a Dicke or full backend space."""
    if space.basis == "dicke":
        if noise.has_individual:
            raise ValueError(
                "individual qubit rates (gamma_d, gamma_l) break the "
                "symmetric subspace; use the full backend for them"
            )
        ops = collective_operators(space)
        collapse = []
        if noise.Gamma_d > 0:
            collapse.append((ops["jz"], 2 * noise.Gamma_d))
        if noise.Gamma_l > 0:
            collapse.append((ops["jminus"], noise.Gamma_l))
        return Generator(space, omega * ops["jx"], collapse, noise, omega)

    ops = full_space_operators(space)
    collapse = []
    if noise.Gamma_d > 0:
        collapse.append((ops["jz"], 2 * noise.Gamma_d))
    if noise.Gamma_l > 0:
        collapse.append((ops["jminus"], noise.Gamma_l))
    for k in range(space.n_qubits):
        if noise.gamma_d > 0:
            collapse.append((ops["sigma_z"][k], noise.gamma_d / 2))
        if noise.gamma_l > 0:
            collapse.append((ops["sigma_minus"][k], noise.gamma_l))
    return Generator(space, omega * ops["jx"], collapse, noise, omega)


def _integrate(gen, a, times, adjoint, rtol, atol):
    """Solve A_dot = M[A] (or the adjoint equation) at the requested times."""
    dim = gen.dim
    action = gen.apply_adjoint if adjoint else gen.apply

    def rhs(_t, y):
        return action(y.reshape(dim, dim)).ravel()

    t_end = times[-1]
    if t_end == 0:
        return np.array([a.astype(complex)])
    sol = solve_ivp(rhs, (0.0, t_end), np.asarray(a, dtype=complex).ravel(),
                    t_eval=times, method="DOP853", rtol=rtol, atol=atol)
    if not sol.success:
        reached = sol.t[-1] if sol.t.size else 0.0
        raise IntegrationError(
            f"integration stopped at t={reached:.6g} of {t_end:.6g}: "
            f"{sol.message}"
        )
    return sol.y.T.reshape(len(times), dim, dim)


def propagate(gen, a, duration, rtol=DEFAULT_RTOL, atol=DEFAULT_ATOL):
    """exp(M * duration) applied to the operator a."""
    if duration < 0:
        raise ValueError(f"duration must be >= 0, got {duration}")
    if duration == 0:
        return np.array(a, dtype=complex, copy=True)
    return _integrate(gen, a, np.array([duration]), False, rtol, atol)[0]


def propagate_stack(gen, ops, duration, rtol=DEFAULT_RTOL, atol=DEFAULT_ATOL):
    """Propagate several operators through one integrator pass.

    The generator is linear, so co-integrating a stack costs one pass with a
    shared (slightly conservative) step-size control.
    """
    if duration < 0:
        raise ValueError(f"duration must be >= 0, got {duration}")
    stack = np.stack([np.asarray(a, dtype=complex) for a in ops])
    if duration == 0:
        return stack
    n_ops, dim = stack.shape[0], gen.dim

    def rhs(_t, y):
        blocks = y.reshape(n_ops, dim, dim)
        return np.stack([gen.apply(b) for b in blocks]).ravel()

    sol = solve_ivp(rhs, (0.0, duration), stack.ravel(), method="DOP853",
                    rtol=rtol, atol=atol)
    if not sol.success:
        reached = sol.t[-1] if sol.t.size else 0.0
        raise IntegrationError(
            f"integration stopped at t={reached:.6g} of {duration:.6g}: "
            f"{sol.message}"
        )
    return sol.y[:, -1].reshape(n_ops, dim, dim)


def propagate_grid(gen, a, times, adjoint=False, rtol=DEFAULT_RTOL,
                   atol=DEFAULT_ATOL):
    """Operators exp(M t)[a] (or adjoint) at an ascending grid of times.

    One integrator pass with dense output; times must be sorted, >= 0.
    """
    times = np.asarray(times, dtype=float)
    if times.size == 0:
        return np.empty((0, gen.dim, gen.dim), dtype=complex)
    if np.any(np.diff(times) < 0) or times[0] < 0:
        raise ValueError("times must be ascending and non-negative")
    return _integrate(gen, a, times, adjoint, rtol, atol)


@lru_cache(maxsize=64)
def _jx_eigensystem(n_qubits):
    jx = collective_operators(DickeSpace(n_qubits))["jx"]
    w, v = np.linalg.eigh(jx)
    return w, v


def unitary_propagator(space, omega, duration):
    """Dense unitary exp(-i Omega Jx duration) on the Dicke space.

    Built from the cached eigendecomposition of Jx, so repeated calls at
    many durations are cheap and exactly form a one-parameter group.
    """
    w, v = _jx_eigensystem(space.n_qubits)
    phase = np.exp(-1j * omega * w * duration)
    return (v * phase) @ v.conj().T

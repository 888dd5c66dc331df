# Exact 2^N-space simulation, required when individual-qubit noise breaks
# the symmetric subspace.  Reuses the measurement and correlation pipeline
# through the FULL backend operators; density matrices are dense, operators
# sparse, so the per-step cost stays O(N 4^N).

import numpy as np

from .dynamics import (DEFAULT_ATOL, DEFAULT_RTOL, build_generator,
                       propagate_grid)
from .lgi import k_curve
from .operators import FullSpace, initial_state, symmetric_isometry

CURVE_CAP = 10
POINT_CAP = 12


def memory_estimate_bytes(n_qubits):
    """Working-set estimate for one full-space propagation (a few states)."""
    dim = 2 ** n_qubits
    return 8 * dim * dim * 16


def check_cap(n_qubits, cap):
    if n_qubits > cap:
        raise ValueError(
            f"N={n_qubits} exceeds the full-space cap {cap} "
            f"(estimated {memory_estimate_bytes(n_qubits) / 2**20:.0f} MiB)"
        )


def run_full(scheme, n_qubits, noise, grid=None, grid_points=None,
             refine_tol=1e-6, cap=CURVE_CAP, rtol=DEFAULT_RTOL,
             atol=DEFAULT_ATOL):
    """K(tau) curve on the full 2^N backend."""
    check_cap(n_qubits, cap)
    space = FullSpace(n_qubits, cap=max(cap, n_qubits))
    gen = build_generator(space, noise)
    rho0 = initial_state(space)
    if grid_points is None and grid is None:
        grid_points = 128  # full-space integration is costly; default coarse
    return k_curve(scheme, gen, rho0, grid=grid, grid_points=grid_points,
                   refine_tol=refine_tol, rtol=rtol, atol=atol)


def symmetric_projector_check(n_qubits, noise, times, cap=POINT_CAP,
                              rtol=DEFAULT_RTOL, atol=DEFAULT_ATOL):
    """tr(P_sym rho(t)) at the requested times; 1 iff no symmetric-sector
    leakage (collective-only noise keeps it at 1)."""
    check_cap(n_qubits, cap)
    space = FullSpace(n_qubits, cap=max(cap, n_qubits))
    gen = build_generator(space, noise)
    rho0 = initial_state(space)
    times = np.asarray(times, dtype=float)
    order = np.argsort(times)
    states = propagate_grid(gen, rho0, times[order], rtol=rtol, atol=atol)
    v = symmetric_isometry(n_qubits)
    out = np.empty(times.size)
    for rank, idx in enumerate(order):
        out[idx] = np.trace(v.T @ states[rank] @ v).real
    return out

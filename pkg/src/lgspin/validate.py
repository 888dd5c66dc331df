# Self-validation: runs the analytic-oracle and invariant checks and
# reports one PASS/FAIL line per check.  The fast level covers N <= 10
# structure and oracle checks; the full level adds the large-N Dicke
# asymptotes and full-space runs.

import numpy as np
import scipy.linalg as sla

from . import lgi
from .dynamics import NoiseParams, build_generator, propagate
from .fullspace import run_full
from .measurement import SCHEME_IDS, MeasurementScheme
from .operators import (DickeSpace, FullSpace, collective_operators,
                        full_space_operators, initial_state,
                        jz_eigenprojectors, symmetric_isometry)
from .wigner import small_d, transition_probability_matrix

INV_2PI = 1 / (2 * np.pi)


def _check_su2_algebra():
    worst = 0.0
    for n in (1, 2, 3, 5, 8):
        ops = collective_operators(DickeSpace(n))
        jx, jy, jz = ops["jx"], ops["jy"], ops["jz"]
        for a, b, c in ((jx, jy, jz), (jy, jz, jx), (jz, jx, jy)):
            worst = max(worst, np.max(np.abs(a @ b - b @ a - 1j * c)))
    return worst < 1e-12, f"max commutator residual {worst:.2e}"


def _check_casimir():
    worst = 0.0
    for n in (1, 2, 4, 7, 10):
        space = DickeSpace(n)
        ops = collective_operators(space)
        j = space.j
        total = ops["jx"] @ ops["jx"] + ops["jy"] @ ops["jy"] + ops["jz"] @ ops["jz"]
        worst = max(worst, np.max(np.abs(total - j * (j + 1) * np.eye(space.dim))))
    return worst < 1e-12, f"max Casimir residual {worst:.2e}"


def _check_symmetric_isometry():
    worst = 0.0
    for n in (2, 4, 6):
        full = full_space_operators(FullSpace(n))
        dicke = collective_operators(DickeSpace(n))
        v = symmetric_isometry(n)
        for key in ("jx", "jz", "jminus"):
            reduced = v.T @ (full[key] @ v)
            worst = max(worst, np.max(np.abs(reduced - dicke[key])))
    return worst < 1e-12, f"max isometry residual {worst:.2e}"


def _check_wigner_orthogonality():
    worst = 0.0
    for j in (0.5, 1, 2.5, 6, 10):
        dim = int(round(2 * j)) + 1
        ms = np.arange(dim) - j
        for beta in (0.3, 1.1, 2.7):
            d = np.array([[small_d(j, mf, mt, beta) for mf in ms] for mt in ms])
            worst = max(worst, np.max(np.abs(d @ d.T - np.eye(dim))))
    return worst < 1e-10, f"max orthogonality residual {worst:.2e}"


def _check_transition_matrix():
    worst_sum = 0.0
    worst_expm = 0.0
    for j in (0.5, 2, 5, 8):
        jx = collective_operators(DickeSpace(int(round(2 * j))))["jx"]
        for theta in (0.7, 1.9):
            p = transition_probability_matrix(j, theta)
            worst_sum = max(worst_sum,
                            np.max(np.abs(p.sum(axis=0) - 1)),
                            np.max(np.abs(p.sum(axis=1) - 1)))
            u = sla.expm(-1j * theta * jx)
            worst_expm = max(worst_expm, np.max(np.abs(p - np.abs(u) ** 2)))
    ok = worst_sum < 1e-10 and worst_expm < 1e-10
    return ok, f"stochasticity {worst_sum:.2e}, vs expm {worst_expm:.2e}"


def _check_measurement_completeness():
    worst = 0.0
    for space in (DickeSpace(5), FullSpace(4)):
        projectors = list(jz_eigenprojectors(space).values())
        total = sum(np.asarray(p.todense()) if hasattr(p, "todense") else p
                    for p in projectors)
        worst = max(worst, np.max(np.abs(total - np.eye(space.dim))))
    return worst < 1e-14, f"max completeness residual {worst:.2e}"


def _check_trace_preservation():
    space = DickeSpace(6)
    gen = build_generator(space, NoiseParams(Gamma_d=INV_2PI, Gamma_l=0.5 * INV_2PI))
    rho = propagate(gen, initial_state(space), 2 * np.pi)
    tr_err = abs(np.trace(rho) - 1)
    herm_err = np.max(np.abs(rho - rho.conj().T))
    min_eig = np.linalg.eigvalsh((rho + rho.conj().T) / 2).min()
    ok = tr_err < 1e-8 and herm_err < 1e-9 and min_eig > -1e-7
    return ok, (f"trace {tr_err:.2e}, hermiticity {herm_err:.2e}, "
                f"min eig {min_eig:.2e}")


def _check_single_qubit_kmax():
    space = DickeSpace(1)
    gen = build_generator(space, NoiseParams())
    rho0 = initial_state(space)
    worst_k = 0.0
    worst_tau = 0.0
    for sid in SCHEME_IDS:
        k_max, tau = lgi.k_max_search(MeasurementScheme(sid), gen, rho0,
                                      refine_tol=1e-9)
        worst_k = max(worst_k, abs(k_max - 1.5))
        worst_tau = max(worst_tau, abs(tau - np.pi / 3))
    ok = worst_k < 1e-6 and worst_tau < 1e-6
    return ok, f"|K-1.5| <= {worst_k:.2e}, |tau-pi/3| <= {worst_tau:.2e}"


def _check_extreme_oracle():
    space = DickeSpace(10)
    gen = build_generator(space, NoiseParams())
    grid = np.linspace(0, np.pi, 101)[1:]
    curve = lgi.k_curve(MeasurementScheme("extreme-vn"), gen,
                        initial_state(space), grid=grid, method="integrate")
    err = np.max(np.abs(curve.k - lgi.k_extreme_closed_form(5, grid)))
    return err < 1e-7, f"master equation vs closed form: {err:.2e}"


def _check_n1_noise_calibration():
    scheme = MeasurementScheme("central-vn")
    full = FullSpace(1)
    k_full, _ = lgi.k_max_search(
        scheme, build_generator(full, NoiseParams(gamma_d=INV_2PI)),
        initial_state(full), grid_points=400, refine_tol=1e-8)
    dicke = DickeSpace(1)
    k_dicke, _ = lgi.k_max_search(
        scheme, build_generator(dicke, NoiseParams(Gamma_d=INV_2PI)),
        initial_state(dicke), grid_points=400, refine_tol=1e-8)
    err = abs(k_full - k_dicke)
    return err < 1e-8, f"|K_full - K_dicke| = {err:.2e}"


def _check_backend_equivalence():
    scheme = MeasurementScheme("central-vn")
    grid = np.linspace(0, np.pi, 26)[1:]
    worst = 0.0
    for noise in (NoiseParams(Gamma_d=INV_2PI), NoiseParams(Gamma_l=0.5 * INV_2PI)):
        dicke = DickeSpace(4)
        c_d = lgi.k_curve(scheme, build_generator(dicke, noise),
                          initial_state(dicke), grid=grid)
        full = FullSpace(4)
        c_f = lgi.k_curve(scheme, build_generator(full, noise),
                          initial_state(full), grid=grid)
        worst = max(worst, np.max(np.abs(c_d.k - c_f.k)))
    return worst < 1e-7, f"max Dicke/full K difference {worst:.2e}"


def _check_single_state_asymptote():
    space = DickeSpace(100)
    gen = build_generator(space, NoiseParams())
    k_max, tau = lgi.k_max_search(MeasurementScheme("single-state-vn"), gen,
                                  initial_state(space))
    target = lgi.k_single_state_asymptote(50)
    ok = abs(k_max - target) < 0.02 and abs(tau - np.pi / 2) < 0.1
    return ok, f"K_max(N=100) = {k_max:.4f} vs 3 - sqrt(2/(pi j)) = {target:.4f}"


def _check_extreme_asymptote():
    k_max, _ = lgi.k_extreme_max(1e4)
    return abs(k_max - 1.055) < 1e-3, f"max K at j=1e4: {k_max:.6f} (target 1.055)"


def _check_lueders_collapse():
    space = DickeSpace(30)
    gen = build_generator(space, NoiseParams())
    k_max, tau = lgi.k_max_search(MeasurementScheme("central-lueders"), gen,
                                  initial_state(space))
    return k_max <= 1 + 1e-6, f"K_max(N=30) = {k_max:.8f} at {tau:.4f}"


def _check_fullspace_enhancement():
    scheme = MeasurementScheme("central-lueders")
    noise = NoiseParams(gamma_d=INV_2PI, gamma_l=0.5 * INV_2PI)
    details = []
    ok = True
    for n in (5, 6):
        noisy = run_full(scheme, n, noise, grid_points=96, refine_tol=1e-4)
        dicke = DickeSpace(n)
        free, _ = lgi.k_max_search(scheme, build_generator(dicke, NoiseParams()),
                                   initial_state(dicke), grid_points=96,
                                   refine_tol=1e-4)
        ok = ok and noisy.k_max >= free
        details.append(f"N={n}: {noisy.k_max:.5f} vs {free:.5f}")
    return ok, "; ".join(details)


def _check_collective_dissipation_parity():
    space = DickeSpace(20)
    gen = build_generator(space, NoiseParams(Gamma_l=0.5 * INV_2PI))
    k_max, _ = lgi.k_max_search(MeasurementScheme("parity-vn"), gen,
                                initial_state(space), grid_points=400,
                                refine_tol=1e-5)
    return k_max < 1, f"K_max(N=20, parity, Gamma_l) = {k_max:.6f}"


FAST_CHECKS = (
    ("su2-commutators", _check_su2_algebra),
    ("casimir", _check_casimir),
    ("symmetric-isometry", _check_symmetric_isometry),
    ("wigner-orthogonality", _check_wigner_orthogonality),
    ("transition-matrix", _check_transition_matrix),
    ("measurement-completeness", _check_measurement_completeness),
    ("trace-preservation", _check_trace_preservation),
    ("single-qubit-kmax", _check_single_qubit_kmax),
    ("extreme-scheme-oracle", _check_extreme_oracle),
    ("n1-noise-calibration", _check_n1_noise_calibration),
    ("backend-equivalence", _check_backend_equivalence),
)

FULL_CHECKS = FAST_CHECKS + (
    ("single-state-asymptote", _check_single_state_asymptote),
    ("extreme-asymptote-1.055", _check_extreme_asymptote),
    ("lueders-collapse-n30", _check_lueders_collapse),
    ("collective-dissipation-parity", _check_collective_dissipation_parity),
    ("fullspace-lueders-enhancement", _check_fullspace_enhancement),
)


def run_checks(level="fast"):
    """Run the suite; yields (name, passed, detail)."""
    checks = FAST_CHECKS if level == "fast" else FULL_CHECKS
    for name, fn in checks:
        try:
            passed, detail = fn()
        except Exception as exc:  # a crash is a failure, not an abort
            passed, detail = False, f"raised {type(exc).__name__}: {exc}"
        yield name, passed, detail

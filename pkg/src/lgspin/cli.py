# Batch runner CLI: curve, kmax-sweep, disconnectivity, validate and
# plot-script subcommands.  Sweeps fan out (scheme, N) jobs to a process
# pool (size from LGSPIN_WORKERS, default: available parallelism); results
# are assembled in job order, so identical configs give byte-identical CSVs.

import argparse
import os
import sys
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path

import numpy as np

from . import __version__, lgi
from .config import BACKENDS, ConfigError, load_config, parse_n_list
from .dynamics import build_generator
from .fullspace import CURVE_CAP, run_full
from .macroscopicity import disconnectivity
from .measurement import (M_ZERO_MINUS, M_ZERO_PLUS, MeasurementScheme,
                          SCHEME_IDS)
from .operators import DickeSpace, initial_state

WORKERS_ENV = "LGSPIN_WORKERS"


def _fmt(x):
    return f"{x:.16e}"


def _worker_count():
    value = os.environ.get(WORKERS_ENV)
    if value:
        return max(1, int(value))
    return os.cpu_count() or 1


def noise_tag(noise):
    """Figure-style label for the noise setting."""
    parts = []
    if noise.Gamma_d > 0:
        parts.append("collective-dephasing")
    if noise.Gamma_l > 0:
        parts.append("collective-dissipation")
    if noise.gamma_d > 0:
        parts.append("individual-dephasing")
    if noise.gamma_l > 0:
        parts.append("individual-dissipation")
    return "+".join(parts) if parts else "noise-free"


def _provenance(command, cfg, scheme=None, n=None, backend=None):
    noise = cfg.noise
    lines = [
        f"# tool: lgspin {__version__}",
        f"# command: {command}",
        f"# noise: gamma_d={noise.gamma_d!r} gamma_l={noise.gamma_l!r} "
        f"Gamma_d={noise.Gamma_d!r} Gamma_l={noise.Gamma_l!r}",
        f"# boundary: {cfg.boundary}",
        f"# grid_points: {cfg.grid_points if cfg.grid_points else 'auto'}",
        f"# refine_tol: {cfg.refine_tol!r}",
    ]
    if scheme is not None:
        lines.insert(2, f"# scheme: {scheme}")
    if n is not None:
        lines.insert(3, f"# n_qubits: {n}")
    if backend is not None:
        lines.append(f"# backend: {backend}")
    return lines


def _curve_job(args):
    scheme_id, n, cfg = args
    scheme = MeasurementScheme(scheme_id, boundary=cfg.boundary)
    backend = cfg.backend_for(n)
    if backend == "full":
        curve = run_full(scheme, n, cfg.noise, grid_points=cfg.grid_points,
                         refine_tol=cfg.refine_tol)
    else:
        space = DickeSpace(n)
        gen = build_generator(space, cfg.noise)
        curve = lgi.k_curve(scheme, gen, initial_state(space),
                            grid_points=cfg.grid_points,
                            refine_tol=cfg.refine_tol)
    return curve


def _run_jobs(jobs, fn):
    workers = min(_worker_count(), len(jobs))
    if workers <= 1:
        return [fn(job) for job in jobs]
    with ProcessPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, jobs))


def cmd_curve(cfg):
    cfg.output_dir.mkdir(parents=True, exist_ok=True)
    jobs = [(s, n, cfg) for s in cfg.schemes for n in cfg.n_values]
    curves = _run_jobs(jobs, _curve_job)
    paths = []
    for (scheme_id, n, _), curve in zip(jobs, curves):
        path = cfg.output_dir / f"curve_{scheme_id}_N{n}.csv"
        lines = _provenance("curve", cfg, scheme=scheme_id, n=n,
                            backend=curve.backend)
        lines.append("omega_tau,K,C21,C32,C31")
        for i in range(curve.omega_tau.size):
            lines.append(",".join(_fmt(v) for v in (
                curve.omega_tau[i], curve.k[i], curve.c21[i],
                curve.c32[i], curve.c31[i])))
        path.write_text("\n".join(lines) + "\n")
        paths.append(path)
    return paths


def cmd_kmax_sweep(cfg):
    cfg.output_dir.mkdir(parents=True, exist_ok=True)
    jobs = [(s, n, cfg) for s in cfg.schemes for n in cfg.n_values]
    curves = _run_jobs(jobs, _curve_job)
    path = cfg.output_dir / "kmax_sweep.csv"
    lines = _provenance("kmax-sweep", cfg)
    lines.append("scheme,n_qubits,noise_tag,k_max,omega_tau_max,backend")
    tag = noise_tag(cfg.noise)
    for (scheme_id, n, _), curve in zip(jobs, curves):
        lines.append(f"{scheme_id},{n},{tag},{_fmt(curve.k_max)},"
                     f"{_fmt(curve.omega_tau_max)},{curve.backend}")
    path.write_text("\n".join(lines) + "\n")
    return [path]


def cmd_disconnectivity(cfg):
    cfg.output_dir.mkdir(parents=True, exist_ok=True)
    path = cfg.output_dir / "disconnectivity.csv"
    lines = _provenance("disconnectivity", cfg)
    lines.append("scheme,n_qubits,delta_best,delta_worst,delta_av,"
                 "plus_mean,minus_mean,plus_levels,minus_levels")
    for scheme_id in cfg.schemes:
        for n in cfg.n_values:
            rep = disconnectivity(scheme_id, n)
            plus = ";".join(str(m) for m in rep.plus_levels)
            minus = ";".join(str(m) for m in rep.minus_levels)
            lines.append(
                f"{scheme_id},{n},{_fmt(rep.delta_best)},"
                f"{_fmt(rep.delta_worst)},{_fmt(rep.delta_av)},"
                f"{_fmt(rep.plus_mean)},{_fmt(rep.minus_mean)},{plus},{minus}"
            )
    path.write_text("\n".join(lines) + "\n")
    return [path]


def cmd_validate(level, stream=None):
    from .validate import run_checks
    stream = stream if stream is not None else sys.stdout
    failures = 0
    for name, passed, detail in run_checks(level):
        status = "PASS" if passed else "FAIL"
        failures += not passed
        print(f"{status}\t{name}\t{detail}", file=stream)
    summary = "all checks passed" if failures == 0 else f"{failures} check(s) failed"
    print(f"# {summary}", file=stream)
    return 0 if failures == 0 else 1


_PLOT_TEMPLATE = '''\
#!/usr/bin/env python3
# Generated by lgspin {version}.  Renders K curves / K_max sweeps with the
# classical bound K = 1 marked.  Needs only numpy and matplotlib.
import numpy as np
import matplotlib.pyplot as plt

CURVES = {curves!r}
SWEEPS = {sweeps!r}


def read_csv(path):
    header = {{}}
    n_comment = 0
    with open(path) as fh:
        for line in fh:
            if not line.startswith("#"):
                break
            n_comment += 1
            if ":" in line:
                key, _, value = line[1:].partition(":")
                header[key.strip()] = value.strip()
    data = np.genfromtxt(path, delimiter=",", skip_header=n_comment,
                         names=True, dtype=None, encoding="utf-8")
    return header, data


if CURVES:
    n = len(CURVES)
    ncols = 3 if n > 2 else n
    nrows = -(-n // ncols)
    fig, axes = plt.subplots(nrows, ncols, figsize=(4 * ncols, 3 * nrows),
                             squeeze=False, sharex=True)
    for ax, path in zip(axes.ravel(), CURVES):
        header, data = read_csv(path)
        ax.plot(data["omega_tau"], data["K"], lw=1.2)
        ax.axhline(1.0, color="turquoise", lw=1.0)
        ax.set_title(f"{{header.get('scheme', '?')}} N={{header.get('n_qubits', '?')}}",
                     fontsize=9)
        ax.set_xlabel(r"$\\Omega\\tau$")
        ax.set_ylabel("K")
    for ax in axes.ravel()[n:]:
        ax.axis("off")
    fig.tight_layout()
    fig.savefig("k_vs_time.png", dpi=200)

if SWEEPS:
    fig, ax = plt.subplots(figsize=(5, 4))
    for path in SWEEPS:
        header, data = read_csv(path)
        data = np.atleast_1d(data)
        for scheme in sorted(set(data["scheme"])):
            rows = data[data["scheme"] == scheme]
            tag = rows["noise_tag"][0]
            order = np.argsort(rows["n_qubits"])
            ax.plot(rows["n_qubits"][order], rows["k_max"][order],
                    marker="o", ms=3, label=f"{{scheme}} ({{tag}})")
    ax.axhline(1.0, color="turquoise", lw=1.0)
    ax.set_xlabel("N")
    ax.set_ylabel(r"$K_{{\\mathrm{{max}}}}$")
    ax.legend(fontsize=7)
    fig.tight_layout()
    fig.savefig("kmax_vs_n.png", dpi=200)

plt.show()
'''


def generate_plot_script(csv_paths):
    """A self-contained matplotlib script rendering the given CSV files."""
    curves, sweeps = [], []
    for path in csv_paths:
        path = Path(path)
        if not path.exists():
            raise FileNotFoundError(f"no such CSV: {path}")
        head = path.read_text().splitlines()
        if not head or not head[0].startswith("# tool: lgspin"):
            raise ValueError(f"{path}: not an lgspin CSV (missing provenance)")
        command = next((ln.split(":", 1)[1].strip() for ln in head
                        if ln.startswith("# command:")), "")
        if command == "curve":
            curves.append(str(path))
        elif command == "kmax-sweep":
            sweeps.append(str(path))
        else:
            raise ValueError(f"{path}: no plot layout for command {command!r}")
    return _PLOT_TEMPLATE.format(version=__version__, curves=curves,
                                 sweeps=sweeps)


def cmd_plot_script(csv_paths, out_path):
    script = generate_plot_script(csv_paths)
    out_path = Path(out_path)
    out_path.write_text(script)
    return out_path


def _add_common(parser):
    parser.add_argument("--config", type=Path, help="flat key=value config file")
    parser.add_argument("--scheme", action="append", metavar="ID",
                        help=f"repeatable; one of {', '.join(SCHEME_IDS)}")
    parser.add_argument("--n", action="append", metavar="N",
                        help="ensemble size, repeatable; ranges like 2..10")
    parser.add_argument("--gamma-d", type=float, help="individual dephasing rate")
    parser.add_argument("--gamma-l", type=float, help="individual relaxation rate")
    parser.add_argument("--gamma-D-coll", type=float, dest="gamma_d_coll",
                        help="collective dephasing rate")
    parser.add_argument("--gamma-L-coll", type=float, dest="gamma_l_coll",
                        help="collective relaxation rate")
    parser.add_argument("--backend", choices=BACKENDS)
    parser.add_argument("--grid-points", type=int)
    parser.add_argument("--refine-tol", type=float)
    parser.add_argument("--boundary", choices=(M_ZERO_MINUS, M_ZERO_PLUS))
    parser.add_argument("--out", type=Path, help="output directory")


def _config_from_args(args):
    overrides = {}
    if args.scheme:
        overrides["schemes"] = ",".join(args.scheme)
    if args.n:
        parse_n_list(args.n)  # early diagnostics
        overrides["n_values"] = ",".join(args.n)
    for key, attr in (("gamma_d", "gamma_d"), ("gamma_l", "gamma_l"),
                      ("Gamma_d", "gamma_d_coll"), ("Gamma_l", "gamma_l_coll")):
        value = getattr(args, attr)
        if value is not None:
            overrides[key] = repr(value)
    if args.backend:
        overrides["backend"] = args.backend
    if args.grid_points is not None:
        overrides["grid_points"] = str(args.grid_points)
    if args.refine_tol is not None:
        overrides["refine_tol"] = repr(args.refine_tol)
    if args.boundary:
        overrides["boundary"] = args.boundary
    if args.out:
        overrides["output_dir"] = str(args.out)
    return load_config(args.config, overrides)


def build_parser():
    parser = argparse.ArgumentParser(
        prog="lgspin",
        description="Leggett-Garg inequality sweeps for collective qubit "
                    "ensembles",
    )
    parser.add_argument("--version", action="version",
                        version=f"lgspin {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    for name, help_text in (("curve", "K(tau) curves, one CSV per (scheme, N)"),
                            ("kmax-sweep", "K_max over (scheme, N) into one CSV"),
                            ("disconnectivity", "disconnectivity table CSV")):
        p = sub.add_parser(name, help=help_text)
        _add_common(p)

    p = sub.add_parser("validate", help="run the oracle/invariant check suite")
    p.add_argument("--level", choices=("fast", "full"), default="fast")

    p = sub.add_parser("plot-script",
                       help="emit a matplotlib script for lgspin CSVs")
    p.add_argument("csv", nargs="+", help="CSV files produced by this tool")
    p.add_argument("--out", type=Path, default=Path("plot_lgspin.py"))
    return parser


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        if args.command == "validate":
            return cmd_validate(args.level)
        if args.command == "plot-script":
            path = cmd_plot_script(args.csv, args.out)
            print(f"wrote {path}")
            return 0
        cfg = _config_from_args(args)
        if args.command == "curve":
            paths = cmd_curve(cfg)
        elif args.command == "kmax-sweep":
            paths = cmd_kmax_sweep(cfg)
        else:
            if any(s == "normalized-jz-vn" for s in cfg.schemes):
                raise ConfigError(
                    "schemes: normalized-jz-vn defines no two-state binning; "
                    "disconnectivity is undefined for it"
                )
            paths = cmd_disconnectivity(cfg)
        for path in paths:
            print(f"wrote {path}")
        return 0
    except (ConfigError, FileNotFoundError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())

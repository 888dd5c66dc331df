import re
from pathlib import Path

import numpy as np
import pytest

from lgspin import cli
from lgspin.config import (ConfigError, RunConfig, config_from_mapping,
                           load_config, parse_n_list, read_config_file)
from lgspin.dynamics import NoiseParams

FLOAT_RE = re.compile(r"-?\d\.\d{16}e[+-]\d{2}$")


def test_parse_n_list():
    assert parse_n_list(["3"]) == [3]
    assert parse_n_list(["1", "4..7", "20"]) == [1, 4, 5, 6, 7, 20]
    with pytest.raises(ConfigError):
        parse_n_list(["4..2"])
    with pytest.raises(ConfigError):
        parse_n_list(["two"])


def test_config_file_roundtrip(tmp_path):
    path = tmp_path / "run.cfg"
    path.write_text(
        "# comment line\n"
        "schemes = central-vn, extreme-vn\n"
        "n_values = 2, 5..6\n"
        "Gamma_d = 0.25  # inline comment\n"
        "backend = dicke\n"
        "grid_points = 128\n"
        "boundary = m0-plus\n"
        "output_dir = results\n"
    )
    cfg = load_config(path)
    assert cfg.schemes == ["central-vn", "extreme-vn"]
    assert cfg.n_values == [2, 5, 6]
    assert cfg.noise == NoiseParams(Gamma_d=0.25)
    assert cfg.backend == "dicke"
    assert cfg.grid_points == 128
    assert cfg.boundary == "m0-plus"
    assert cfg.output_dir == Path("results")


def test_overrides_win(tmp_path):
    path = tmp_path / "run.cfg"
    path.write_text("schemes = central-vn\nGamma_d = 0.25\n")
    cfg = load_config(path, {"Gamma_d": "0.5", "n_values": "3"})
    assert cfg.noise.Gamma_d == 0.5
    assert cfg.n_values == [3]


def test_config_validation_errors(tmp_path):
    with pytest.raises(ConfigError, match="unknown scheme"):
        config_from_mapping({"schemes": "majority"}).validate()
    with pytest.raises(ConfigError, match="unknown config key"):
        config_from_mapping({"flux": "1"})
    with pytest.raises(ConfigError, match="backend"):
        config_from_mapping({"backend": "gpu"}).validate()
    with pytest.raises(ConfigError, match="grid_points"):
        config_from_mapping({"grid_points": "32"}).validate()
    with pytest.raises(ConfigError):
        config_from_mapping({"gamma_l": "-0.1"}).validate()
    bad = tmp_path / "bad.cfg"
    bad.write_text("just a line\n")
    with pytest.raises(ConfigError, match="key = value"):
        read_config_file(bad)


def test_auto_backend_resolution():
    cfg = RunConfig(noise=NoiseParams(Gamma_d=0.1))
    assert cfg.backend_for(5) == "dicke"
    cfg = RunConfig(noise=NoiseParams(gamma_d=0.1))
    assert cfg.backend_for(5) == "full"
    cfg = RunConfig(noise=NoiseParams(gamma_d=0.1), backend="dicke")
    assert cfg.backend_for(5) == "dicke"


def test_noise_tag():
    assert cli.noise_tag(NoiseParams()) == "noise-free"
    assert cli.noise_tag(NoiseParams(Gamma_d=0.1)) == "collective-dephasing"
    assert cli.noise_tag(NoiseParams(Gamma_l=0.1)) == "collective-dissipation"
    assert cli.noise_tag(NoiseParams(gamma_d=0.1, gamma_l=0.1)) == \
        "individual-dephasing+individual-dissipation"


def read_rows(path):
    header, rows = [], []
    for line in Path(path).read_text().splitlines():
        (header if line.startswith("#") else rows).append(line)
    return header, rows


def test_cli_curve_csv(tmp_path):
    rc = cli.main(["curve", "--scheme", "central-vn", "--n", "2",
                   "--grid-points", "64", "--refine-tol", "1e-3",
                   "--out", str(tmp_path)])
    assert rc == 0
    path = tmp_path / "curve_central-vn_N2.csv"
    header, rows = read_rows(path)
    assert header[0].startswith("# tool: lgspin")
    assert any("scheme: central-vn" in h for h in header)
    assert any("backend: dicke" in h for h in header)
    assert rows[0] == "omega_tau,K,C21,C32,C31"
    assert len(rows) == 1 + 64
    for field in rows[1].split(","):
        assert FLOAT_RE.match(field), field
    data = np.array([[float(x) for x in r.split(",")] for r in rows[1:]])
    assert np.allclose(data[:, 1], data[:, 2] + data[:, 3] - data[:, 4])


def test_cli_kmax_sweep_with_workers(tmp_path, monkeypatch):
    monkeypatch.setenv(cli.WORKERS_ENV, "2")
    rc = cli.main(["kmax-sweep", "--scheme", "central-vn",
                   "--scheme", "parity-vn", "--n", "1..2",
                   "--grid-points", "64", "--refine-tol", "1e-3",
                   "--out", str(tmp_path)])
    assert rc == 0
    header, rows = read_rows(tmp_path / "kmax_sweep.csv")
    assert rows[0] == "scheme,n_qubits,noise_tag,k_max,omega_tau_max,backend"
    # deterministic job order: schemes outer, N inner
    ids = [r.split(",")[0] for r in rows[1:]]
    assert ids == ["central-vn", "central-vn", "parity-vn", "parity-vn"]
    first = rows[1].split(",")
    assert first[1] == "1" and first[2] == "noise-free" and first[5] == "dicke"
    assert abs(float(first[3]) - 1.5) < 1e-3


def test_cli_disconnectivity_csv(tmp_path):
    rc = cli.main(["disconnectivity", "--scheme", "central-vn",
                   "--n", "4", "--out", str(tmp_path)])
    assert rc == 0
    header, rows = read_rows(tmp_path / "disconnectivity.csv")
    fields = rows[1].split(",")
    assert fields[0] == "central-vn" and fields[1] == "4"
    assert float(fields[2]) == 4.0  # best
    assert float(fields[3]) == 1.0  # worst
    assert float(fields[4]) == 2.0  # average
    rc = cli.main(["disconnectivity", "--scheme", "normalized-jz-vn",
                   "--n", "4", "--out", str(tmp_path)])
    assert rc == 2


def test_cli_error_paths(tmp_path, capsys):
    assert cli.main(["curve", "--scheme", "nonsense", "--n", "1",
                     "--out", str(tmp_path)]) == 2
    assert "unknown scheme" in capsys.readouterr().err
    assert cli.main(["curve", "--config", str(tmp_path / "missing.cfg")]) == 2
    assert cli.main(["curve", "--n", "4..1", "--out", str(tmp_path)]) == 2


def test_cli_validate_levels(monkeypatch, capsys):
    import lgspin.validate as validate

    def fake_checks(level):
        yield "alpha", True, "ok"
        yield "beta", level == "fast", "detail"

    monkeypatch.setattr(validate, "run_checks", fake_checks)
    assert cli.main(["validate", "--level", "fast"]) == 0
    out = capsys.readouterr().out
    assert "PASS\talpha" in out and "PASS\tbeta" in out
    assert cli.main(["validate", "--level", "full"]) == 1
    assert "FAIL\tbeta" in capsys.readouterr().out


def test_plot_script_generation(tmp_path):
    cli.main(["curve", "--scheme", "central-vn", "--n", "1",
              "--grid-points", "64", "--refine-tol", "1e-3",
              "--out", str(tmp_path)])
    cli.main(["kmax-sweep", "--scheme", "central-vn", "--n", "1",
              "--grid-points", "64", "--refine-tol", "1e-3",
              "--out", str(tmp_path)])
    out = tmp_path / "plot.py"
    rc = cli.main(["plot-script", str(tmp_path / "curve_central-vn_N1.csv"),
                   str(tmp_path / "kmax_sweep.csv"), "--out", str(out)])
    assert rc == 0
    script = out.read_text()
    compile(script, str(out), "exec")  # must be valid python
    assert "axhline(1.0" in script  # the classical bound is drawn
    # refuses CSVs this tool did not write
    foreign = tmp_path / "foreign.csv"
    foreign.write_text("a,b\n1,2\n")
    assert cli.main(["plot-script", str(foreign), "--out", str(out)]) == 2

# Run configuration: a flat key = value config file, CLI flag overrides,
# and validation.  Example config:
#
#   schemes = central-vn, extreme-vn
#   n_values = 1, 2..10, 100
#   gamma_d = 0
#   gamma_l = 0
#   Gamma_d = 0.159154943
#   Gamma_l = 0
#   backend = auto
#   grid_points = 2000
#   refine_tol = 1e-6
#   boundary = m0-minus
#   output_dir = out
#
# backend "auto" selects the full 2^N backend iff an individual rate is
# nonzero, else the Dicke backend.

from dataclasses import dataclass, field, replace
from pathlib import Path

from .dynamics import NoiseParams
from .measurement import M_ZERO_MINUS, M_ZERO_PLUS, SCHEME_IDS

BACKENDS = ("dicke", "full", "auto")


class ConfigError(ValueError):
    """A configuration field failed validation."""


@dataclass
class RunConfig:
    schemes: list = field(default_factory=lambda: list(SCHEME_IDS))
    n_values: list = field(default_factory=lambda: [1])
    noise: NoiseParams = field(default_factory=NoiseParams)
    backend: str = "auto"
    grid_points: int | None = None  # None: max(2000, 20 N)
    refine_tol: float = 1e-6
    boundary: str = M_ZERO_MINUS
    output_dir: Path = Path("out")

    def validate(self):
        if not self.schemes:
            raise ConfigError("schemes: at least one scheme is required")
        for s in self.schemes:
            if s not in SCHEME_IDS:
                raise ConfigError(
                    f"schemes: unknown scheme {s!r}; valid: {', '.join(SCHEME_IDS)}"
                )
        if not self.n_values:
            raise ConfigError("n_values: at least one ensemble size is required")
        for n in self.n_values:
            if not isinstance(n, int) or n < 1:
                raise ConfigError(f"n_values: {n!r} is not a positive integer")
        if self.backend not in BACKENDS:
            raise ConfigError(
                f"backend: {self.backend!r} not one of {BACKENDS}"
            )
        if self.grid_points is not None and self.grid_points < 64:
            raise ConfigError(
                f"grid_points: must be >= 64, got {self.grid_points}"
            )
        if not 0 < self.refine_tol <= 1e-2:
            raise ConfigError(
                f"refine_tol: must be in (0, 1e-2], got {self.refine_tol}"
            )
        if self.boundary not in (M_ZERO_MINUS, M_ZERO_PLUS):
            raise ConfigError(f"boundary: unknown policy {self.boundary!r}")
        try:
            self.noise.__post_init__()
        except ValueError as exc:
            raise ConfigError(f"noise: {exc}") from exc
        return self

    def backend_for(self, n_qubits):
        """Resolve the auto backend per ensemble size."""
        if self.backend != "auto":
            return self.backend
        return "full" if self.noise.has_individual else "dicke"


def parse_n_list(tokens):
    """Ensemble sizes from tokens like '3' or '2..10'."""
    out = []
    for tok in tokens:
        tok = tok.strip()
        if ".." in tok:
            lo, _, hi = tok.partition("..")
            try:
                lo, hi = int(lo), int(hi)
            except ValueError as exc:
                raise ConfigError(f"n_values: bad range {tok!r}") from exc
            if hi < lo:
                raise ConfigError(f"n_values: empty range {tok!r}")
            out.extend(range(lo, hi + 1))
        else:
            try:
                out.append(int(tok))
            except ValueError as exc:
                raise ConfigError(f"n_values: bad entry {tok!r}") from exc
    return out


def _split_list(value):
    return [t for t in (tok.strip() for tok in value.split(",")) if t]


def read_config_file(path):
    """Parse a flat key = value file into a dict of raw strings."""
    raw = {}
    for lineno, line in enumerate(Path(path).read_text().splitlines(), 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"{path}:{lineno}: expected 'key = value'")
        key, _, value = line.partition("=")
        raw[key.strip()] = value.strip()
    return raw


_FLOAT_KEYS = ("gamma_d", "gamma_l", "Gamma_d", "Gamma_l", "refine_tol")


def config_from_mapping(raw, base=None):
    """Apply raw string settings on top of a base RunConfig."""
    cfg = base if base is not None else RunConfig()
    noise_kw = {}
    for key, value in raw.items():
        if key == "schemes":
            cfg = replace(cfg, schemes=_split_list(value))
        elif key == "n_values":
            cfg = replace(cfg, n_values=parse_n_list(_split_list(value)))
        elif key in _FLOAT_KEYS:
            try:
                num = float(value)
            except ValueError as exc:
                raise ConfigError(f"{key}: not a number: {value!r}") from exc
            if key == "refine_tol":
                cfg = replace(cfg, refine_tol=num)
            else:
                noise_kw[key] = num
        elif key == "grid_points":
            try:
                cfg = replace(cfg, grid_points=int(value))
            except ValueError as exc:
                raise ConfigError(f"grid_points: not an integer: {value!r}") from exc
        elif key == "backend":
            cfg = replace(cfg, backend=value)
        elif key == "boundary":
            cfg = replace(cfg, boundary=value)
        elif key == "output_dir":
            cfg = replace(cfg, output_dir=Path(value))
        else:
            raise ConfigError(f"unknown config key {key!r}")
    if noise_kw:
        current = {
            "gamma_d": cfg.noise.gamma_d, "gamma_l": cfg.noise.gamma_l,
            "Gamma_d": cfg.noise.Gamma_d, "Gamma_l": cfg.noise.Gamma_l,
        }
        current.update(noise_kw)
        try:
            cfg = replace(cfg, noise=NoiseParams(**current))
        except ValueError as exc:
            raise ConfigError(str(exc)) from exc
    return cfg


def load_config(path=None, overrides=None):
    """Config file plus override mapping (CLI flags win), validated."""
    cfg = RunConfig()
    if path is not None:
        cfg = config_from_mapping(read_config_file(path), cfg)
    if overrides:
        cfg = config_from_mapping(overrides, cfg)
    return cfg.validate()

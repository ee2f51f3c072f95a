"""Run configuration: JSON file with documented keys, overridable from the command line."""
import json
from dataclasses import asdict, dataclass, field, fields

from .sweep import OBSERVABLES


class ConfigError(ValueError):
    """Invalid configuration; ``field`` names the offending key."""

    def __init__(self, field_name, message):
        super().__init__(f"{field_name}: {message}")
        self.field = field_name


@dataclass
class RunConfig:
    n_sites: int = 4
    j2: float = None
    j2_min: float = 0.0
    j2_max: float = 1.0
    steps: int = 201
    levels: int = 2
    observables: list = field(default_factory=lambda: list(OBSERVABLES))
    out: str = None
    format: str = None
    dense_cap: int = 4096
    lanczos_tol: float = 1e-10
    degeneracy_tol: float = 1e-9
    fd_step: float = 1e-4
    discord_grid: list = field(default_factory=lambda: [64, 128])
    exe_grid: list = field(default_factory=lambda: [48, 96])
    seed: int = 0
    threads: int = 1

    def validate(self, need_j2=False, need_sweep=False):
        _int(self, "n_sites")
        if self.n_sites % 2 or not 4 <= self.n_sites <= 16:
            raise ConfigError("n_sites", "must be even and between 4 and 16")
        if need_j2 and self.j2 is None:
            raise ConfigError("j2", "a single j2 value is required")
        if self.j2 is not None:
            _num(self, "j2")
        if need_sweep:
            _num(self, "j2_min")
            _num(self, "j2_max")
            _int(self, "steps")
            if self.steps < 3:
                raise ConfigError("steps", "must be at least 3")
            if self.j2_max <= self.j2_min:
                raise ConfigError("j2_max", "must exceed j2_min")
        _int(self, "levels")
        if not 1 <= self.levels <= 4:
            raise ConfigError("levels", "must be between 1 and 4")
        bad = sorted(set(self.observables) - set(OBSERVABLES))
        if bad:
            raise ConfigError("observables", f"unknown entries {bad}; choose from {list(OBSERVABLES)}")
        if self.format not in (None, "csv", "json"):
            raise ConfigError("format", "must be 'csv' or 'json'")
        for name in ("lanczos_tol", "degeneracy_tol", "fd_step"):
            _num(self, name)
            if getattr(self, name) <= 0:
                raise ConfigError(name, "must be positive")
        for name in ("dense_cap", "seed", "threads"):
            _int(self, name)
        if self.threads < 1:
            raise ConfigError("threads", "must be >= 1")
        for name in ("discord_grid", "exe_grid"):
            g = getattr(self, name)
            if len(g) != 2 or any(not isinstance(v, int) or v < 2 for v in g):
                raise ConfigError(name, "must be two integers >= 2")
        return self

    def to_json(self):
        return json.dumps(asdict(self), indent=2, sort_keys=True) + "\n"

    @classmethod
    def from_dict(cls, data):
        known = {f.name for f in fields(cls)}
        extra = sorted(set(data) - known)
        if extra:
            raise ConfigError(extra[0], "unknown configuration key")
        return cls(**data)

    @classmethod
    def from_json(cls, text):
        try:
            data = json.loads(text)
        except json.JSONDecodeError as exc:
            raise ConfigError("<file>", f"not valid JSON ({exc})") from exc
        if not isinstance(data, dict):
            raise ConfigError("<file>", "top level must be an object")
        return cls.from_dict(data)

    def solver_kwargs(self):
        return {
            "dense_cap": self.dense_cap,
            "lanczos_tol": self.lanczos_tol,
            "degeneracy_tol": self.degeneracy_tol,
            "seed": self.seed,
        }


def _int(cfg, name):
    v = getattr(cfg, name)
    if not isinstance(v, int) or isinstance(v, bool):
        raise ConfigError(name, f"must be an integer, got {v!r}")


def _num(cfg, name):
    v = getattr(cfg, name)
    if not isinstance(v, (int, float)) or isinstance(v, bool):
        raise ConfigError(name, f"must be a number, got {v!r}")

"""Experiment configuration with JSON round trip and strict validation."""
from __future__ import annotations

import dataclasses
import json
import math
from dataclasses import dataclass, field

from .. import defaults

DEFAULT_CAPS = {
    "p_ratio": defaults.CAP_P_RATIO,
    "logn": defaults.CAP_LOGN,
    "bmo": defaults.CAP_BMO,
    "vector": defaults.CAP_VECTOR,
}


class ConfigError(ValueError):
    """Malformed configuration; the CLI maps this to exit code 2."""


@dataclass(frozen=True)
class ExperimentConfig:
    seed: int = 0
    trials: int = 100
    n_list: tuple = (4, 8, 16, 32, 64)
    logn_n_list: tuple = (4, 8, 16, 32, 64, 128)
    vector_n_list: tuple = (4, 8, 16)
    p_grid: tuple = (1.5, 2.0, 4.0, 8.0, 16.0)
    function_family: str = "pwl"
    function_params: dict = field(default_factory=dict)
    block_side: int = 2
    dilation_spectrum_size: int = 3
    dilation_depth: int = 2
    t_grid_kmin: int = defaults.DYADIC_K_MIN
    t_grid_kmax: int = defaults.DYADIC_K_MAX
    caps: dict = field(default_factory=lambda: dict(DEFAULT_CAPS))
    exact_tol: float = 1e-9
    diag_tol: float = 1e-12
    skip_denominator: float = 1e-12

    def __post_init__(self):
        object.__setattr__(self, "n_list", tuple(int(n) for n in self.n_list))
        object.__setattr__(self, "logn_n_list",
                           tuple(int(n) for n in self.logn_n_list))
        object.__setattr__(self, "vector_n_list",
                           tuple(int(n) for n in self.vector_n_list))
        object.__setattr__(self, "p_grid", tuple(float(p) for p in self.p_grid))
        caps = dict(DEFAULT_CAPS)
        caps.update(self.caps or {})
        object.__setattr__(self, "caps", caps)
        self._validate()

    def _validate(self):
        if not isinstance(self.seed, int) or self.seed < 0 or self.seed >= 2 ** 64:
            raise ConfigError(f"seed must be an unsigned 64-bit integer, got {self.seed!r}")
        if self.trials < 1:
            raise ConfigError(f"trials must be >= 1, got {self.trials}")
        for name in ("n_list", "logn_n_list", "vector_n_list"):
            sizes = getattr(self, name)
            if not sizes or any(n < 2 for n in sizes):
                raise ConfigError(f"{name} entries must be >= 2, got {sizes}")
        if not self.p_grid or any(not (p >= 1.0) for p in self.p_grid):
            raise ConfigError(f"p_grid values must be >= 1, got {self.p_grid}")
        if self.function_family not in ("abs", "pwl", "bump"):
            raise ConfigError(f"unknown function_family {self.function_family!r}")
        if not 1 <= self.block_side <= 4:
            raise ConfigError(f"block_side must be in 1..4, got {self.block_side}")
        if not 2 <= self.dilation_spectrum_size <= 6:
            raise ConfigError("dilation_spectrum_size must be in 2..6, got "
                              f"{self.dilation_spectrum_size}")
        if not 0 <= self.dilation_depth <= 4:
            raise ConfigError(f"dilation_depth must be in 0..4, got {self.dilation_depth}")
        if self.t_grid_kmin > self.t_grid_kmax:
            raise ConfigError("t grid exponents out of order")
        extra = set(self.caps) - set(DEFAULT_CAPS)
        if extra:
            raise ConfigError(f"unknown cap names {sorted(extra)}")
        for name, cap in self.caps.items():
            if not (float(cap) >= 0.0):
                raise ConfigError(f"cap {name} must be >= 0, got {cap}")

    def t_grid(self):
        return defaults.dyadic_t_grid(self.t_grid_kmin, self.t_grid_kmax)

    def to_doc(self) -> dict:
        doc = dataclasses.asdict(self)
        for name in ("n_list", "logn_n_list", "vector_n_list"):
            doc[name] = list(doc[name])
        doc["p_grid"] = ["inf" if math.isinf(p) else p for p in self.p_grid]
        return doc


def config_from_doc(doc: dict, base: ExperimentConfig = None) -> ExperimentConfig:
    """Build a config from a JSON document, overriding base (default) fields."""
    if not isinstance(doc, dict):
        raise ConfigError(f"config document must be an object, got {type(doc).__name__}")
    known = {f.name for f in dataclasses.fields(ExperimentConfig)}
    extra = set(doc) - known
    if extra:
        raise ConfigError(f"unknown config keys {sorted(extra)}")
    merged = (base or ExperimentConfig()).to_doc()
    merged.update(doc)
    if "p_grid" in merged:
        try:
            merged["p_grid"] = [float(p) for p in merged["p_grid"]]
        except (TypeError, ValueError) as exc:
            raise ConfigError(f"bad p_grid entry: {exc}") from None
    try:
        return ExperimentConfig(**merged)
    except ConfigError:
        raise
    except (TypeError, ValueError) as exc:
        raise ConfigError(f"bad config value: {exc}") from None


def load_config(path: str, base: ExperimentConfig = None) -> ExperimentConfig:
    try:
        with open(path) as fh:
            doc = json.load(fh)
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from None
    except json.JSONDecodeError as exc:
        raise ConfigError(f"config {path} is not valid JSON: {exc}") from None
    return config_from_doc(doc, base)

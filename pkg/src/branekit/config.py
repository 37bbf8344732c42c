"""Run configuration: defaults, flat key=value config files, CLI overrides."""

from __future__ import annotations

import math
import os
from dataclasses import dataclass, field, replace

from .oscillator import DEFAULT_ANGLE_GUARD, validate_angle

ENV_CONFIG_PATH = "BRANEKIT_CONFIG"

FORMAT_DELIMITED = "delimited"
FORMAT_STRUCTURED = "structured"

#: Named thresholds used across the checks; every entry must stay positive.
DEFAULT_TOLERANCES = {
    "route_equivalence": 1e-10,
    "eigenvalue_match": 1e-6,
    "identity_exact": 1e-13,
    "identity_pass": 1e-10,
    "trust_mass": 1e-6,
    "minimizer": 1e-8,
    "stationarity": 1e-12,
    "block_eigensolve": 1e-12,
    "hyperbola": 1e-10,
}

_INT_KEYS = {"N", "margin_k", "n_max", "seed"}
_FLOAT_KEYS = {"theta", "z2", "R"}


@dataclass(frozen=True)
class RunConfig:
    """Validated physical parameters, truncation sizes, and thresholds."""

    theta: float = math.pi / 3.0
    z2: float = 1.0
    R: float = 1.0
    N: int = 24
    margin_k: int = 4
    n_max: int = 12
    seed: int = 20240817
    tolerances: dict[str, float] = field(default_factory=lambda: dict(DEFAULT_TOLERANCES))
    output_format: str = FORMAT_DELIMITED

    def validate(self) -> "RunConfig":
        validate_angle(self.theta, DEFAULT_ANGLE_GUARD)
        if self.z2 <= 0.0:
            raise ValueError(f"z2 must be positive, got {self.z2!r}")
        if self.R <= 0.0:
            raise ValueError(f"R must be positive, got {self.R!r}")
        if self.N < 4:
            raise ValueError(f"N must be >= 4, got {self.N}")
        if not 0 < self.margin_k < self.N:
            raise ValueError(f"margin_k must be in (0, N), got {self.margin_k}")
        if self.n_max < 0:
            raise ValueError(f"n_max must be nonnegative, got {self.n_max}")
        unknown = set(self.tolerances) - set(DEFAULT_TOLERANCES)
        if unknown:
            raise ValueError(f"unknown tolerance names: {sorted(unknown)}")
        for name, value in self.tolerances.items():
            if not value > 0.0:
                raise ValueError(f"tolerance {name} must be strictly positive, got {value!r}")
        if self.output_format not in (FORMAT_DELIMITED, FORMAT_STRUCTURED):
            raise ValueError(f"unknown output format {self.output_format!r}")
        return self

    def tol(self, name: str) -> float:
        return self.tolerances[name]


def read_config_file(path: str) -> dict[str, str]:
    """Parse a flat ``key = value`` file; '#' starts a comment."""
    values: dict[str, str] = {}
    with open(path, "r", encoding="utf-8") as handle:
        for lineno, raw in enumerate(handle, 1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise ValueError(f"{path}:{lineno}: expected 'key = value', got {raw.rstrip()!r}")
            key, _, value = line.partition("=")
            values[key.strip()] = value.strip()
    return values


def default_config_path() -> str | None:
    return os.environ.get(ENV_CONFIG_PATH) or None


def build_config(
    file_values: dict[str, str] | None = None,
    overrides: dict[str, object] | None = None,
) -> RunConfig:
    """Layer defaults, then config-file values, then explicit overrides."""
    config = RunConfig()
    if file_values:
        updates: dict[str, object] = {}
        tolerances = dict(config.tolerances)
        for key, raw in file_values.items():
            if key in _FLOAT_KEYS:
                updates[key] = float(raw)
            elif key in _INT_KEYS:
                updates[key] = int(raw)
            elif key == "format":
                updates["output_format"] = raw
            elif key.startswith("tol_"):
                tolerances[key[4:]] = float(raw)
            else:
                raise ValueError(f"unknown config key {key!r}")
        updates["tolerances"] = tolerances
        config = replace(config, **updates)
    if overrides:
        clean = {k: v for k, v in overrides.items() if v is not None}
        if clean:
            config = replace(config, **clean)
    return config.validate()

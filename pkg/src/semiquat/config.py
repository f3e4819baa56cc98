"""Run configuration: one JSON document with every default embedded."""
from __future__ import annotations

import copy
import json
import math
from dataclasses import dataclass, field
from pathlib import Path

from .errors import ConfigError, MetricError
from .semialgebra import MetricContext

DEFAULT_TOLERANCES = {
    "apparatus": 1e-9,
    "frenet_ode": 1e-8,
    "distance": 1e-8,
    "tangency": 1e-8,
    "speed_law": 1e-4,
    "transfer_frame": 1e-4,
    "transfer_curvature": 1e-3,
    "w_curve": 1e-6,
    "theorem35_perp": 1e-8,
    "theorem35_h": 1e-6,
    "theorem35_gap": 0.1,
    "associated_curve": 1e-4,
    "spatial_curvature": 1e-6,
}

# looser values used automatically for finite-difference curves
FD_TOLERANCES = {
    "apparatus": 1e-4,
    "frenet_ode": 1e-4,
    "distance": 1e-5,
    "tangency": 1e-6,
    "w_curve": 1e-4,
    "theorem35_perp": 1e-4,
    "theorem35_h": 1e-4,
    "spatial_curvature": 1e-4,
}

DEFAULT_CONFIG = {
    "metric": {"preset": "default"},
    "curve": {"name": "example31"},
    "fd_step": None,
    "c": 2.0,
    "sample_grid": [-1.0, 1.0, 21],
    "guard": None,
    "tolerances": {},
    "output": {"path": None, "format": "json"},
}

BUILTIN_CURVES = ("example31", "exptrig")


@dataclass
class RunConfig:
    metric: MetricContext = field(default_factory=MetricContext)
    curve: dict = field(default_factory=lambda: {"name": "example31"})
    fd_step: float | None = None
    c: float = 2.0
    sample_grid: tuple[float, float, int] = (-1.0, 1.0, 21)
    guard: float | None = None
    tolerances: dict = field(default_factory=dict)
    output_path: str | None = None
    output_format: str = "json"

    def __post_init__(self):
        a, b, n = self.sample_grid
        if not isinstance(n, int) or isinstance(n, bool):
            if isinstance(n, float) and n.is_integer():
                n = int(n)
            else:
                raise ConfigError(f"sample_grid count must be an integer, got {n!r}")
        a, b = float(a), float(b)
        if n < 2:
            raise ConfigError(f"sample_grid count must be >= 2, got {n}")
        if not (math.isfinite(a) and math.isfinite(b) and a < b):
            raise ConfigError(f"sample_grid needs s_min < s_max, got {a}, {b}")
        self.sample_grid = (a, b, n)
        for key, val in self.tolerances.items():
            if key not in DEFAULT_TOLERANCES:
                raise ConfigError(f"unknown tolerance {key!r}")
            if not (isinstance(val, (int, float)) and val > 0):
                raise ConfigError(f"tolerance {key!r} must be positive, got {val!r}")
        if self.output_format not in ("csv", "json"):
            raise ConfigError(f"output format must be csv or json, got {self.output_format!r}")
        if self.fd_step is not None and not self.fd_step > 0:
            raise ConfigError("fd_step must be positive")
        if self.guard is not None and not self.guard > 0:
            raise ConfigError("guard must be positive")
        if not math.isfinite(float(self.c)):
            raise ConfigError("c must be finite")
        self.c = float(self.c)
        if "csv" not in self.curve and self.curve.get("name") not in BUILTIN_CURVES:
            raise ConfigError(f"curve must name a builtin {BUILTIN_CURVES} or give a csv path")

    @property
    def mode(self) -> str:
        return "fd" if self.fd_step is not None else "analytic"

    def tolerance(self, key: str) -> float:
        if key in self.tolerances:
            return float(self.tolerances[key])
        if self.mode == "fd" and key in FD_TOLERANCES:
            return FD_TOLERANCES[key]
        return DEFAULT_TOLERANCES[key]

    def all_tolerances(self) -> dict:
        return {k: self.tolerance(k) for k in DEFAULT_TOLERANCES}

    def grid(self):
        import numpy as np

        a, b, n = self.sample_grid
        return np.linspace(a, b, n)

    def to_dict(self) -> dict:
        return {
            "metric": self.metric.to_dict(),
            "curve": copy.deepcopy(self.curve),
            "fd_step": self.fd_step,
            "c": self.c,
            "sample_grid": list(self.sample_grid),
            "guard": self.guard,
            "tolerances": self.all_tolerances(),
            "output": {"path": self.output_path, "format": self.output_format},
        }

    @classmethod
    def from_dict(cls, d: dict) -> "RunConfig":
        merged = copy.deepcopy(DEFAULT_CONFIG)
        unknown = set(d) - set(merged)
        if unknown:
            raise ConfigError(f"unknown config fields: {sorted(unknown)}")
        for key, val in d.items():
            if key == "output" and isinstance(val, dict):
                merged["output"].update(val)
            else:
                merged[key] = val
        try:
            metric = MetricContext.from_dict(merged["metric"])
        except (MetricError, TypeError) as exc:
            raise ConfigError(f"metric: {exc}") from exc
        grid = merged["sample_grid"]
        if not isinstance(grid, (list, tuple)) or len(grid) != 3:
            raise ConfigError("sample_grid must be [s_min, s_max, count]")
        curve = merged["curve"]
        if isinstance(curve, str):
            curve = {"csv": curve} if curve.endswith(".csv") else {"name": curve}
        return cls(
            metric=metric,
            curve=dict(curve),
            fd_step=merged["fd_step"],
            c=merged["c"],
            sample_grid=tuple(grid),
            guard=merged["guard"],
            tolerances=dict(merged["tolerances"]),
            output_path=merged["output"].get("path"),
            output_format=merged["output"].get("format", "json"),
        )

    @classmethod
    def load(cls, path) -> "RunConfig":
        try:
            data = json.loads(Path(path).read_text(encoding="utf-8"))
        except OSError as exc:
            raise ConfigError(f"cannot read config {path}: {exc}") from exc
        except json.JSONDecodeError as exc:
            raise ConfigError(f"config {path} is not valid JSON: {exc}") from exc
        if not isinstance(data, dict):
            raise ConfigError("config must be a JSON object")
        return cls.from_dict(data)


def parse_grid(text: str) -> tuple[float, float, int]:
    """Parse ``a:b:n``."""
    parts = text.split(":")
    if len(parts) != 3:
        raise ConfigError(f"grid must look like a:b:n, got {text!r}")
    try:
        a, b = float(parts[0]), float(parts[1])
        n = int(parts[2])
    except ValueError as exc:
        raise ConfigError(f"grid must look like a:b:n, got {text!r}") from exc
    return a, b, n

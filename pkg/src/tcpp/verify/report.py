"""Grid descriptions and residual reports for equation certification."""

from __future__ import annotations

import json
from dataclasses import dataclass, field

import numpy as np

from ..errors import DomainError


@dataclass(frozen=True)
class GridSpec:
    """Dyadically refined time grid on [t_min, t_max].

    Refinement level l has (points - 1) * 2^l + 1 nodes, halving the step
    each level.  All residual checks run on t > 0, away from distributional
    atoms at the time origin; Caputo-operator equations anchor their grids at
    the origin internally and use t_min as the measurement window start.
    """

    t_min: float
    t_max: float
    points: int = 17
    refinement_levels: int = 4

    def __post_init__(self):
        if not 0 < self.t_min < self.t_max:
            raise DomainError("need 0 < t_min < t_max")
        if self.points < 8:
            raise DomainError("points must be >= 8")
        if not 2 <= self.refinement_levels <= 6:
            raise DomainError("refinement_levels must be in [2, 6]")

    def level_times(self, level: int) -> np.ndarray:
        n = (self.points - 1) * 2 ** level + 1
        return np.linspace(self.t_min, self.t_max, n)

    def level_step(self, level: int) -> float:
        return (self.t_max - self.t_min) / ((self.points - 1) * 2 ** level)


@dataclass(frozen=True)
class LevelResidual:
    h: float
    max_residual: float
    l2_residual: float


@dataclass
class ResidualReport:
    """Residual norms per refinement level plus the pass/fail verdict."""

    equation_id: str
    params: dict
    levels: list
    estimated_order: float | None
    floor_limited: bool
    passed: bool
    band: tuple
    scale: float = 1.0
    extras: dict = field(default_factory=dict)

    @property
    def finest_residual(self) -> float:
        return self.levels[-1].max_residual

    def to_dict(self) -> dict:
        return {
            "equation_id": self.equation_id,
            "params": self.params,
            "levels": [
                {"h": lv.h, "max_residual": lv.max_residual, "l2_residual": lv.l2_residual}
                for lv in self.levels
            ],
            "estimated_order": self.estimated_order,
            "pass": bool(self.passed),
            "floor_limited": bool(self.floor_limited),
            "band": list(self.band),
            "scale": self.scale,
            "extras": _jsonable(self.extras),
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2)


def _jsonable(obj):
    if isinstance(obj, dict):
        return {k: _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return [float(v) for v in obj]
    if isinstance(obj, (np.floating, np.integer)):
        return float(obj)
    return obj

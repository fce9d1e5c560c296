"""Algebraic description of time-change processes and its JSON wire format.

The JSON schema is the CLI's process-description contract:

    {"type": "ig",       "delta": 1.0, "gamma": 1.0}
    {"type": "stable",   "beta": 0.5}
    {"type": "tempered", "beta": 0.5, "mu": 1.0}
    {"type": "compose",  "parts": [spec, ...]}      # outermost part first
    {"type": "inverse",  "base": spec}
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field

import numpy as np

from ..errors import DomainError

MAX_NESTING = 8


@dataclass(frozen=True)
class SubordinatorSpec:
    """Base class; use the concrete variants below."""

    def to_dict(self) -> dict:
        raise NotImplementedError

    def to_json(self) -> str:
        return json.dumps(self.to_dict())

    def depth(self) -> int:
        return 1

    def label(self) -> str:
        return json.dumps(self.to_dict(), separators=(",", ":"))


@dataclass(frozen=True)
class InverseGaussian(SubordinatorSpec):
    delta: float
    gamma: float

    def __post_init__(self):
        if self.delta <= 0:
            raise DomainError("IG requires delta > 0")
        if self.gamma < 0:
            raise DomainError("IG requires gamma >= 0")

    def to_dict(self):
        return {"type": "ig", "delta": self.delta, "gamma": self.gamma}


@dataclass(frozen=True)
class Stable(SubordinatorSpec):
    beta: float

    def __post_init__(self):
        if not 0 < self.beta < 1:
            raise DomainError("stable index must satisfy 0 < beta < 1")

    def to_dict(self):
        return {"type": "stable", "beta": self.beta}


@dataclass(frozen=True)
class TemperedStable(SubordinatorSpec):
    beta: float
    mu: float

    def __post_init__(self):
        if not 0 < self.beta < 1:
            raise DomainError("tempered stable index must satisfy 0 < beta < 1")
        if self.mu <= 0:
            raise DomainError("tempered stable requires mu > 0")

    def to_dict(self):
        return {"type": "tempered", "beta": self.beta, "mu": self.mu}


@dataclass(frozen=True)
class Composition(SubordinatorSpec):
    """parts[0](parts[1](... parts[-1](t))) -- function-composition order."""

    parts: tuple

    def __post_init__(self):
        if not self.parts:
            raise DomainError("composition needs at least one part")
        object.__setattr__(self, "parts", tuple(self.parts))
        for p in self.parts:
            if isinstance(p, (Composition, InverseOf)):
                raise DomainError("composition parts must be plain subordinators")
            if not isinstance(p, SubordinatorSpec):
                raise DomainError("composition parts must be SubordinatorSpec")
        if self.depth() > MAX_NESTING:
            raise DomainError(f"nesting depth exceeds {MAX_NESTING}")

    def depth(self):
        return 1 + max(p.depth() for p in self.parts)

    def to_dict(self):
        return {"type": "compose", "parts": [p.to_dict() for p in self.parts]}


@dataclass(frozen=True)
class InverseOf(SubordinatorSpec):
    base: SubordinatorSpec

    def __post_init__(self):
        if isinstance(self.base, InverseOf):
            raise DomainError("inverse of an inverse is not supported")
        if not isinstance(self.base, SubordinatorSpec):
            raise DomainError("inverse needs a SubordinatorSpec base")
        if self.depth() > MAX_NESTING:
            raise DomainError(f"nesting depth exceeds {MAX_NESTING}")

    def depth(self):
        return 1 + self.base.depth()

    def to_dict(self):
        return {"type": "inverse", "base": self.base.to_dict()}


def spec_from_dict(d: dict) -> SubordinatorSpec:
    if not isinstance(d, dict) or "type" not in d:
        raise DomainError("spec object must be a dict with a 'type' field")
    kind = d["type"]
    try:
        if kind == "ig":
            return InverseGaussian(float(d["delta"]), float(d["gamma"]))
        if kind == "stable":
            return Stable(float(d["beta"]))
        if kind == "tempered":
            return TemperedStable(float(d["beta"]), float(d["mu"]))
        if kind == "compose":
            return Composition(tuple(spec_from_dict(p) for p in d["parts"]))
        if kind == "inverse":
            return InverseOf(spec_from_dict(d["base"]))
    except KeyError as exc:
        raise DomainError(f"spec of type '{kind}' is missing field {exc}") from exc
    raise DomainError(f"unknown spec type '{kind}'")


def spec_from_json(text: str) -> SubordinatorSpec:
    try:
        return spec_from_dict(json.loads(text))
    except json.JSONDecodeError as exc:
        raise DomainError(f"spec is not valid JSON: {exc}") from exc


def flatten_stable_composition(spec: SubordinatorSpec):
    """Effective stable index if the spec is a (composition of) stable law(s).

    Composing stable subordinators with unit Laplace-exponent coefficients
    multiplies the indices; returns None when the spec is not of that shape.
    """
    if isinstance(spec, Stable):
        return spec.beta
    if isinstance(spec, Composition) and all(isinstance(p, Stable) for p in spec.parts):
        out = 1.0
        for p in spec.parts:
            out *= p.beta
        return out
    return None


@dataclass(frozen=True)
class SampleBatch:
    """Monte Carlo draws of a subordinator value at a fixed time."""

    spec: SubordinatorSpec
    t: float
    seed: int
    values: np.ndarray = field(repr=False)

    def __post_init__(self):
        values = np.asarray(self.values, dtype=float)
        object.__setattr__(self, "values", values)
        if np.any(values < 0):
            raise DomainError("subordinator samples must be nonnegative")

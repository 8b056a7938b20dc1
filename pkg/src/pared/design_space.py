"""Bounded hyperparameter domains, unit-cube transforms and seeded designs.

Everything downstream (surrogates, acquisition, reports) works on the unit
cube; natural-scale values exist only at the solver boundary. Transforms are
exact at the bounds so round-trips never drift out of the box.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

_SCALES = ("linear", "log10")


@dataclass(frozen=True)
class HyperparameterSpec:
    """One searchable hyperparameter with natural-scale bounds."""

    name: str
    lower: float
    upper: float
    scale: str = "linear"

    def __post_init__(self):
        if self.scale not in _SCALES:
            raise ValueError(f"{self.name}: unknown scale {self.scale!r}, expected one of {_SCALES}")
        if not (np.isfinite(self.lower) and np.isfinite(self.upper)):
            raise ValueError(f"{self.name}: bounds must be finite")
        if not self.lower < self.upper:
            raise ValueError(f"{self.name}: need lower < upper, got [{self.lower}, {self.upper}]")
        if self.scale == "log10" and self.lower <= 0:
            raise ValueError(f"{self.name}: log10 scale needs lower > 0")


@dataclass(frozen=True)
class DesignSpace:
    specs: tuple[HyperparameterSpec, ...]

    def __post_init__(self):
        object.__setattr__(self, "specs", tuple(self.specs))
        if not self.specs:
            raise ValueError("a design space needs at least one hyperparameter")
        names = [s.name for s in self.specs]
        if len(set(names)) != len(names):
            raise ValueError(f"duplicate hyperparameter names: {names}")

    @property
    def dimension(self) -> int:
        return len(self.specs)

    @property
    def names(self) -> tuple[str, ...]:
        return tuple(s.name for s in self.specs)


@dataclass(frozen=True)
class DesignPoint:
    """A location in the domain, kept in both coordinate systems."""

    unit: np.ndarray
    natural: np.ndarray


def to_natural(u: float, spec: HyperparameterSpec) -> float:
    """Map a unit coordinate into the natural range of ``spec``."""
    if not 0.0 <= u <= 1.0:
        raise ValueError(f"{spec.name}: unit coordinate {u} outside [0, 1]")
    if u == 0.0:
        return spec.lower
    if u == 1.0:
        return spec.upper
    if spec.scale == "linear":
        return spec.lower + u * (spec.upper - spec.lower)
    lo, hi = np.log10(spec.lower), np.log10(spec.upper)
    return float(10.0 ** (lo + u * (hi - lo)))


def to_unit(value: float, spec: HyperparameterSpec) -> float:
    """Inverse of :func:`to_natural`."""
    if not spec.lower <= value <= spec.upper:
        raise ValueError(f"{spec.name}: value {value} outside [{spec.lower}, {spec.upper}]")
    if value == spec.lower:
        return 0.0
    if value == spec.upper:
        return 1.0
    if spec.scale == "linear":
        return (value - spec.lower) / (spec.upper - spec.lower)
    lo, hi = np.log10(spec.lower), np.log10(spec.upper)
    return float((np.log10(value) - lo) / (hi - lo))


def point_from_unit(space: DesignSpace, unit) -> DesignPoint:
    unit = np.asarray(unit, dtype=float)
    if unit.shape != (space.dimension,):
        raise ValueError(f"expected {space.dimension} unit coordinates, got shape {unit.shape}")
    natural = np.array([to_natural(float(u), s) for u, s in zip(unit, space.specs)])
    return DesignPoint(unit=unit, natural=natural)


def _rng(seed) -> np.random.Generator:
    # Philox is counter-based, so the same seed gives the same stream on
    # every platform regardless of how many draws other code made.
    return np.random.Generator(np.random.Philox(np.random.SeedSequence(seed)))


def latin_hypercube(space: DesignSpace, n: int, seed) -> list[DesignPoint]:
    """n stratified points: each dimension gets one point per stratum
    [k/n, (k+1)/n), with stratum assignment permuted independently per
    dimension and uniform jitter inside the stratum."""
    if n < 1:
        raise ValueError("n must be >= 1")
    rng = _rng(seed)
    d = space.dimension
    strata = np.empty((n, d))
    for j in range(d):
        strata[:, j] = rng.permutation(n)
    jitter = rng.random((n, d))
    unit = (strata + jitter) / n
    return [point_from_unit(space, unit[i]) for i in range(n)]

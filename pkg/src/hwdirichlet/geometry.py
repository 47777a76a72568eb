"""Angles, circle points, and arcs on the unit circle.

Arcs are stored as (start, length) so wraparound is unambiguous; an arc is the
open set of angles swept counterclockwise from ``start`` over ``length``
radians.  All angle comparisons use a fixed tolerance of 1e-12 radians (below
quadrature noise, above double rounding).  Values are immutable after
construction and safe for concurrent shared reads.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

from .errors import DilationOverflow, InvalidGamma

TWO_PI = 2.0 * math.pi
ANGLE_TOL = 1e-12


def normalize_angle(theta: float) -> float:
    """Reduce an angle to [0, 2*pi)."""
    t = math.fmod(theta, TWO_PI)
    if t < 0.0:
        t += TWO_PI
    if t >= TWO_PI:  # fmod rounding can land exactly on 2*pi
        t = 0.0
    return t


def angular_distance(a: float, b: float) -> float:
    """Shortest angular distance between two angles, in [0, pi]."""
    d = abs(normalize_angle(a) - normalize_angle(b))
    return min(d, TWO_PI - d)


def chord(a: float, b: float) -> float:
    """Euclidean distance |e^{ia} - e^{ib}|."""
    return 2.0 * abs(math.sin(0.5 * (a - b)))


@dataclass(frozen=True)
class CirclePoint:
    """A point e^{i*theta} on the unit circle; theta normalized to [0, 2*pi)."""

    theta: float

    def __post_init__(self) -> None:
        object.__setattr__(self, "theta", normalize_angle(float(self.theta)))

    @property
    def point(self) -> complex:
        return cmath.exp(1j * self.theta)

    def rotated(self, phi: float) -> "CirclePoint":
        return CirclePoint(self.theta + phi)


def as_angle(x) -> float:
    """Coerce a CirclePoint or a bare angle to a normalized float angle."""
    if isinstance(x, CirclePoint):
        return x.theta
    return normalize_angle(float(x))


@dataclass(frozen=True)
class Arc:
    """Open arc from ``start`` sweeping ``length`` radians counterclockwise."""

    start: float
    length: float

    def __post_init__(self) -> None:
        length = float(self.length)
        if not (0.0 < length < TWO_PI):
            raise ValueError(f"arc length must be in (0, 2*pi), got {length}")
        object.__setattr__(self, "start", normalize_angle(float(self.start)))
        object.__setattr__(self, "length", length)

    @property
    def midpoint(self) -> float:
        return normalize_angle(self.start + 0.5 * self.length)

    @property
    def end(self) -> float:
        return normalize_angle(self.start + self.length)

    def contains(self, theta: float) -> bool:
        """Open-arc membership with the package angle tolerance."""
        d = normalize_angle(float(theta) - self.start)
        return ANGLE_TOL < d < self.length - ANGLE_TOL

    def rotated(self, phi: float) -> "Arc":
        return Arc(self.start + phi, self.length)

    def to_dict(self) -> dict:
        return {"start": self.start, "length": self.length}

    @staticmethod
    def from_dict(d: dict) -> "Arc":
        unknown = set(d) - {"start", "length"}
        if unknown:
            raise ValueError(f"unknown arc keys: {sorted(unknown)}")
        return Arc(float(d["start"]), float(d["length"]))


def dilate(arc: Arc, gamma: float) -> Arc:
    """Scale an arc about its midpoint by a factor gamma > 1."""
    if not gamma > 1.0:
        raise InvalidGamma(f"gamma must be > 1, got {gamma}")
    new_length = gamma * arc.length
    if new_length >= TWO_PI:
        raise DilationOverflow(
            f"gamma*length = {new_length} >= 2*pi; dilation leaves the circle"
        )
    return Arc(arc.midpoint - 0.5 * new_length, new_length)


def pairwise_disjoint(arcs: list[Arc]) -> bool:
    """True iff no two arcs intersect as open subsets of the circle.

    Sorts by start and checks the cyclic chain of gaps; arcs touching at an
    endpoint (within the angle tolerance) count as disjoint.
    """
    n = len(arcs)
    if n < 2:
        return True
    order = sorted(range(n), key=lambda i: arcs[i].start)
    for k in range(n):
        a = arcs[order[k]]
        if k + 1 < n:
            nxt = arcs[order[k + 1]].start
        else:
            nxt = arcs[order[0]].start + TWO_PI
        if a.start + a.length > nxt + ANGLE_TOL:
            return False
    return True

"""Uniqueness-criterion series and the capacitary Poincare probe.

The criterion series for an arc family (I_n) and per-arc capacities c_n is

    S_N = sum_{n <= N} |I_n| * log(|I_n| / c_n),

tracked at geometric checkpoints and classified by series.classify_partial_sums.
Any capacity equal to zero forces an immediate diverges-to-minus-infinity
verdict with the offending index recorded.  Terms are accumulated strictly in
index order, so recomputing from a prefix checkpoint reproduces the same
partial sums bit for bit.

The probe evaluates the empirical Poincare ratio

    kappa = <f>_I^2 * cap(E cap I) / (D_{gamma I, T, mu}(f) + int_{gamma I} |f|^2 dm)

for functions vanishing on a finite set inside I.  It is a probe of the
capacitary Poincare inequality, not a verification of its universal
quantifier: only finiteness, scale invariance, and rotation equivariance are
asserted over the shipped corpus.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from .capacity import CapacityEstimate, point_capacity
from .errors import DegenerateDenominator, FamilyInvalid
from .geometry import Arc, TWO_PI, as_angle, dilate, pairwise_disjoint
from .holomorphic import BoundaryFunction, Polynomial, arc_average, arc_l2, localized_energy, vanishing_on
from .measures import Measure, combine
from .series import DIVERGES_MINUS, DivergenceReport, classify_partial_sums


# ---------------------------------------------------------------------------
# arc families
# ---------------------------------------------------------------------------


class LogLogArcs:
    """Arcs accumulating at angle 0 with endpoints 1/log n, shrunk so the
    gamma-dilations are the touching complementary arcs (disjoint as open
    sets).  Index starts at n_min >= 2."""

    kind = "loglog"

    def __init__(self, n_min: int = 2, shrink: float | None = None):
        if n_min < 2:
            raise ValueError("n_min must be >= 2 (1/log n needs n >= 2)")
        self.n_min = int(n_min)
        self.shrink = shrink  # None: pick 1/gamma at validation time

    def lengths(self, count: int, gamma: float) -> np.ndarray:
        n = np.arange(self.n_min, self.n_min + count, dtype=float)
        gaps = 1.0 / np.log(n) - 1.0 / np.log(n + 1.0)
        s = (1.0 / gamma) if self.shrink is None else self.shrink
        return gaps * s

    def arcs(self, count: int, gamma: float) -> list[Arc]:
        n = np.arange(self.n_min, self.n_min + count, dtype=float)
        hi = 1.0 / np.log(n)
        lo = 1.0 / np.log(n + 1.0)
        mids = 0.5 * (hi + lo)
        lens = self.lengths(count, gamma)
        return [Arc(m - 0.5 * l, l) for m, l in zip(mids, lens)]


class GeometricArcs:
    """Arcs between consecutive points ratio^n accumulating at angle 0."""

    kind = "geometric"

    def __init__(self, ratio: float, theta0: float = 1.0, n_min: int = 1):
        if not (0.0 < ratio < 1.0):
            raise ValueError("ratio must lie in (0, 1)")
        self.ratio = float(ratio)
        self.theta0 = float(theta0)
        self.n_min = int(n_min)

    def lengths(self, count: int, gamma: float) -> np.ndarray:
        n = np.arange(self.n_min, self.n_min + count, dtype=float)
        gaps = self.theta0 * (1.0 - self.ratio) * self.ratio**n
        return gaps / gamma

    def arcs(self, count: int, gamma: float) -> list[Arc]:
        n = np.arange(self.n_min, self.n_min + count, dtype=float)
        hi = self.theta0 * self.ratio**n
        lo = hi * self.ratio
        mids = 0.5 * (hi + lo)
        lens = self.lengths(count, gamma)
        return [Arc(m - 0.5 * l, l) for m, l in zip(mids, lens)]


class ExplicitArcs:
    kind = "explicit"

    def __init__(self, arcs: Sequence[Arc]):
        self._arcs = list(arcs)

    def lengths(self, count: int, gamma: float) -> np.ndarray:
        if count > len(self._arcs):
            raise ValueError(f"family has only {len(self._arcs)} arcs")
        return np.asarray([a.length for a in self._arcs[:count]])

    def arcs(self, count: int, gamma: float) -> list[Arc]:
        if count > len(self._arcs):
            raise ValueError(f"family has only {len(self._arcs)} arcs")
        return list(self._arcs[:count])


@dataclass
class ArcFamilySpec:
    """A parametric arc family together with the dilation factor gamma.

    Construction validates that the gamma-dilated arcs are pairwise disjoint
    (constructively for the parametric generators, explicitly for lists).
    """

    generator: LogLogArcs | GeometricArcs | ExplicitArcs
    gamma: float

    def __post_init__(self):
        if not self.gamma > 1.0:
            raise FamilyInvalid("gamma must be > 1")
        g = self.generator
        if isinstance(g, (LogLogArcs, GeometricArcs)):
            # dilations land inside touching windows by construction when the
            # shrink factor is at most 1/gamma; spot-check the leading arcs
            if isinstance(g, LogLogArcs) and g.shrink is not None and g.shrink * self.gamma > 1.0 + 1e-12:
                raise FamilyInvalid("shrink * gamma must be <= 1 for disjoint dilations")
            probe = [dilate(a, self.gamma) for a in g.arcs(64, self.gamma)]
            if not pairwise_disjoint(probe):
                raise FamilyInvalid("dilated arcs overlap")
        else:
            dil = [dilate(a, self.gamma) for a in g.arcs(len(g._arcs), self.gamma)]
            if not pairwise_disjoint(dil):
                raise FamilyInvalid("dilated arcs overlap")

    def lengths(self, count: int) -> np.ndarray:
        return self.generator.lengths(count, self.gamma)

    def arcs(self, count: int) -> list[Arc]:
        return self.generator.arcs(count, self.gamma)


# ---------------------------------------------------------------------------
# capacity sources
# ---------------------------------------------------------------------------


class PowerLawRule:
    """Closed-form per-arc capacity c_n = C * |I_n|^alpha."""

    def __init__(self, C: float = 1.0, alpha: float = 1.0):
        if C < 0:
            raise ValueError("C must be nonnegative")
        self.C = float(C)
        self.alpha = float(alpha)

    def capacities(self, family: ArcFamilySpec, count: int) -> np.ndarray:
        return self.C * family.lengths(count) ** self.alpha

    def scaled(self, lam: float) -> "PowerLawRule":
        return PowerLawRule(lam * self.C, self.alpha)


class ExplicitCaps:
    def __init__(self, caps: Sequence[float]):
        self.caps = np.asarray(caps, dtype=float)

    def capacities(self, family: ArcFamilySpec, count: int) -> np.ndarray:
        if count > self.caps.size:
            raise ValueError(f"only {self.caps.size} capacities supplied")
        return self.caps[:count]


def as_capacity_source(source) -> Callable[[ArcFamilySpec, int], np.ndarray]:
    if hasattr(source, "capacities"):
        return source.capacities
    if callable(source):
        def caps(family: ArcFamilySpec, count: int) -> np.ndarray:
            lens = family.lengths(count)
            return np.asarray([float(source(n, l)) for n, l in enumerate(lens, start=1)])
        return caps
    raise TypeError("capacity source must expose .capacities or be callable")


# ---------------------------------------------------------------------------
# the criterion series
# ---------------------------------------------------------------------------


def km_criterion(
    mu: Measure,
    family: ArcFamilySpec,
    cap_source,
    checkpoints: Sequence[int] = (10**3, 10**4, 10**5, 10**6),
) -> DivergenceReport:
    """Partial sums of the uniqueness-criterion series at checkpoints.

    ``mu`` fixes the capacity semantics of the supplied source but is not
    consulted when the source is a closed-form rule.  A zero capacity makes
    the corresponding term -infinity, so classification short-circuits to
    diverges-to-minus-infinity with the offending index recorded.
    """
    cps = sorted(int(n) for n in checkpoints)
    if len(cps) < 2 or cps[0] < 1:
        raise ValueError("need at least two positive checkpoints")
    n_max = cps[-1]
    lengths = np.asarray(family.lengths(n_max), dtype=float)
    caps = np.asarray(as_capacity_source(cap_source)(family, n_max), dtype=float)
    if caps.shape != lengths.shape:
        raise ValueError("capacity source returned a mismatched array")
    if (caps < 0).any():
        raise ValueError("capacities must be nonnegative")
    zero_idx = np.nonzero(caps == 0.0)[0]
    if zero_idx.size:
        k = int(zero_idx[0])
        terms = lengths[:k] * (np.log(lengths[:k]) - np.log(caps[:k]))
        sums = np.cumsum(terms)
        pts = [(n, float(sums[n - 1])) for n in cps if n <= k and n >= 1]
        return DivergenceReport(
            pts, DIVERGES_MINUS, f"capacity is zero at arc index n={k + 1}"
        )
    terms = lengths * (np.log(lengths) - np.log(caps))
    sums = np.cumsum(terms)
    pts = [(n, float(sums[n - 1])) for n in cps]
    cls, model = classify_partial_sums(pts)
    return DivergenceReport(pts, cls, model)


# ---------------------------------------------------------------------------
# the Poincare probe
# ---------------------------------------------------------------------------


def _cap_value(cap_source) -> float:
    if isinstance(cap_source, CapacityEstimate):
        return cap_source.cap_scale
    if callable(cap_source):
        return _cap_value(cap_source())
    return float(cap_source)


def poincare_probe(
    f: BoundaryFunction,
    E0: Sequence[float],
    I: Arc,
    gamma: float,
    mu: Measure,
    cap_source,
    tol: float = 1e-9,
) -> float:
    """Empirical Poincare ratio for a function vanishing on E0 inside I."""
    pts = [as_angle(t) for t in E0]
    vals = np.abs(f.boundary_values(np.asarray(pts)))
    scale = float(np.max(np.abs(f.boundary_values(np.linspace(0, TWO_PI, 64)))))
    if vals.size and float(np.max(vals)) > 1e-9 * (1.0 + scale):
        raise ValueError("f does not vanish on E0 (use holomorphic.vanishing_on)")
    gI = dilate(I, gamma)
    avg = arc_average(f, I, tol)
    cap = _cap_value(cap_source)
    denom = localized_energy(f, gI, None, mu, tol) + arc_l2(f, gI, tol)
    if denom <= 1e-280 or not math.isfinite(denom):
        raise DegenerateDenominator("energy + L2 denominator underflows")
    return avg * avg * cap / denom


@dataclass
class ProbeCase:
    """One corpus entry: everything poincare_probe needs, plus a label."""

    name: str
    f: BoundaryFunction
    E0: list[float]
    I: Arc
    mu: Measure
    cap: CapacityEstimate

    def kappa(self, gamma: float, tol: float = 1e-9) -> float:
        return poincare_probe(self.f, self.E0, self.I, gamma, self.mu, self.cap, tol)

    def rotated(self, phi: float) -> "ProbeCase":
        return ProbeCase(
            self.name + f"+rot({phi:.3f})",
            self.f.rotated(-phi),
            [t + phi for t in self.E0],
            self.I.rotated(phi),
            self.mu.rotated(phi),
            point_capacity(self.mu.rotated(phi), self.E0[0] + phi),
        )


def probe_corpus(n_cases: int = 50, seed: int = 20240817) -> list[ProbeCase]:
    """Deterministic 50-case corpus for the probe.

    Every measure carries an atom cluster at the first vanishing point so the
    point-capacity source is genuinely positive.
    """
    from .constructions import lemcap_measure

    rng = np.random.default_rng(seed)
    cases = []
    extra_polys = [
        Polynomial([1.0]),
        Polynomial([2.0, 1.0]),
        Polynomial([1.0, 0.0, 0.5]),
        Polynomial([1.5, -0.5j]),
    ]
    a_choices = [1.0 / 8, 1.0 / 16, 1.0 / 32]
    for i in range(n_cases):
        theta0 = float(rng.uniform(0.0, TWO_PI))
        length = float(rng.uniform(0.05, 0.6))
        start = theta0 - 0.5 * length
        I = Arc(start, length)
        n_extra_zeros = int(rng.integers(0, 2))
        E0 = [theta0]
        for _ in range(n_extra_zeros):
            E0.append(theta0 + float(rng.uniform(-0.3, 0.3)) * length)
        f = vanishing_on(E0, extra_polys[i % len(extra_polys)])
        a = a_choices[i % len(a_choices)]
        cluster = lemcap_measure(theta0, a, k_max=25)
        if i % 5 == 0:
            mu = combine(cluster, Measure.lebesgue().scaled(0.5))
        elif i % 5 == 3:
            mu = combine(cluster, Measure.point(theta0 + 1.5, 0.7))
        else:
            mu = cluster
        cap = point_capacity(mu, theta0)
        cases.append(ProbeCase(f"case-{i:02d}", f, E0, I, mu, cap))
    return cases

"""Builders for the explicit measures, sets, and series tests.

Everything here is a pure constructor: generalized Cantor sets, the
atom-cluster measures anchored at circle points, the gap-endpoint measure of
a countable closed set, and the assembled inputs for the criterion pipeline.
Infinite constructions are truncated with an explicit tail_bound, and
increasing the truncation depth changes the total mass by less than the
previous bound.

Float-resolution policy: atom offsets a^k that underflow below the double
resolution of their anchor angle are dropped and their mass is added to
tail_bound, so every stored atom stays strictly inside its window and the
anchor points carry no mass.
"""

from __future__ import annotations

import math
from typing import NamedTuple, Sequence

import numpy as np

from .errors import EpsilonTooLarge, InvalidLengths, PreconditionSeriesConverges
from .geometry import Arc, TWO_PI, as_angle, pairwise_disjoint
from .measures import DistancePowerDensity, Measure, guillot_integral
from .series import (
    CONVERGES,
    DIVERGES_MINUS,
    DIVERGES_PLUS,
    INCONCLUSIVE,
    DivergenceReport,
    classify_partial_sums,
)

ZETA2_MINUS_1 = math.pi**2 / 6.0 - 1.0


# ---------------------------------------------------------------------------
# length rules
# ---------------------------------------------------------------------------


class GeometricLengths:
    """Level lengths l_n = q^-n, kept in log space to survive deep levels."""

    def __init__(self, q: float):
        if not q > 2.0:
            raise InvalidLengths("need q > 2 so that 2*l_{n+1} < l_n")
        self.q = float(q)

    def lengths(self, ns: np.ndarray) -> np.ndarray:
        return self.q ** -np.asarray(ns, dtype=float)

    def log_lengths(self, ns: np.ndarray) -> np.ndarray:
        return -np.asarray(ns, dtype=float) * math.log(self.q)


class ExplicitLengths:
    def __init__(self, values: Sequence[float]):
        v = np.asarray(values, dtype=float)
        if (v <= 0).any():
            raise InvalidLengths("lengths must be positive")
        self.values = v

    def lengths(self, ns: np.ndarray) -> np.ndarray:
        ns = np.asarray(ns, dtype=int)
        if ns.max(initial=0) > self.values.size:
            raise InvalidLengths(f"rule defines only {self.values.size} lengths")
        return self.values[ns - 1]

    def log_lengths(self, ns: np.ndarray) -> np.ndarray:
        return np.log(self.lengths(ns))


def _as_rule(lengths) -> GeometricLengths | ExplicitLengths:
    if isinstance(lengths, (GeometricLengths, ExplicitLengths)):
        return lengths
    if isinstance(lengths, (int, float)):
        return GeometricLengths(float(lengths))
    return ExplicitLengths(lengths)


# ---------------------------------------------------------------------------
# Cantor sets
# ---------------------------------------------------------------------------


class CantorSpec(NamedTuple):
    """Level lengths rule, construction depth, and the hosting base arc."""

    lengths: GeometricLengths | ExplicitLengths
    levels: int
    base_arc: Arc


def cantor_set(spec: CantorSpec) -> list[Arc]:
    """Level-N arcs of the generalized Cantor construction.

    Each level-n arc of relative length l_n keeps two children of relative
    length l_{n+1} at its ends; validity requires l strictly decreasing with
    2*l_{n+1} < l_n.
    """
    rule = _as_rule(spec.lengths)
    if spec.levels < 1:
        raise InvalidLengths("levels must be >= 1")
    ns = np.arange(1, spec.levels + 1)
    ls = rule.lengths(ns)
    prev = 1.0
    for l in ls:
        if not (0.0 < l < prev and 2.0 * l < prev):
            raise InvalidLengths("need decreasing lengths with 2*l_{n+1} < l_n")
        prev = l
    B = spec.base_arc.length
    offsets = np.array([0.0])
    prev = 1.0
    for l in ls:
        offsets = np.concatenate([offsets, offsets + (prev - l) * B])
        prev = l
    offsets.sort()
    return [Arc(spec.base_arc.start + o, ls[-1] * B) for o in offsets]


def cantor_total_length(spec: CantorSpec) -> float:
    """Total length of the level-N arcs (product form)."""
    rule = _as_rule(spec.lengths)
    lN = float(rule.lengths(np.array([spec.levels]))[0])
    return 2**spec.levels * lN * spec.base_arc.length


# ---------------------------------------------------------------------------
# series tests
# ---------------------------------------------------------------------------


def _expand_runs(gap_lengths) -> tuple[np.ndarray, np.ndarray]:
    """Normalize input to (lengths, multiplicities) run arrays."""
    items = list(gap_lengths)
    if items and isinstance(items[0], (tuple, list)):
        lens = np.asarray([float(l) for l, _ in items])
        mult = np.asarray([int(m) for _, m in items], dtype=np.int64)
    else:
        lens = np.asarray([float(l) for l in items])
        mult = np.ones(lens.size, dtype=np.int64)
    if (lens <= 0).any():
        raise ValueError("gap lengths must be positive")
    if (mult <= 0).any():
        raise ValueError("multiplicities must be positive")
    return lens, mult


def carleson_test(
    gap_lengths,
    checkpoints: Sequence[int] | None = None,
    length_tol: float = 1e-9,
) -> DivergenceReport:
    """Joint verdict on sum(l_n log l_n) and the null-set condition sum(l_n)=1.

    ``gap_lengths`` are complementary-arc lengths as fractions of the circle,
    either a flat sequence or (length, multiplicity) runs; checkpoints count
    expanded gaps.  Verdicts: "carleson" when the log series flattens and the
    lengths account for the whole circle within length_tol; "not_carleson"
    when the log series diverges to -infinity or the lengths provably leave
    positive measure; otherwise "inconclusive".
    """
    lens, mult = _expand_runs(gap_lengths)
    counts = np.cumsum(mult)
    total_gaps = int(counts[-1])
    if checkpoints is None:
        checkpoints = [total_gaps // 8, total_gaps // 4, total_gaps // 2, total_gaps]
        checkpoints = sorted({max(1, c) for c in checkpoints})
    cps = sorted({int(c) for c in checkpoints if 1 <= c <= total_gaps})
    exhausted = bool(cps) and cps[-1] == total_gaps
    if len(cps) < 2:
        # degenerate finite inputs: judge the completed sums directly
        cps = [total_gaps]
        exhausted = True

    log_terms = lens * np.log(lens)
    cum_log = np.cumsum(mult * log_terms)
    cum_len = np.cumsum(mult * lens)
    if cum_len[-1] > 1.0 + 1e-9:
        raise ValueError("gap lengths exceed the circle")

    def at(n: int, cum: np.ndarray, per: np.ndarray) -> float:
        # partial sum over the first n expanded gaps
        i = int(np.searchsorted(counts, n))
        base = cum[i - 1] if i > 0 else 0.0
        done = counts[i - 1] if i > 0 else 0
        return float(base + (n - done) * per[i])

    log_pts = [(n, at(n, cum_log, log_terms)) for n in cps]
    len_pts = [(n, at(n, cum_len, lens)) for n in cps]

    if len(log_pts) >= 2:
        log_cls, model = classify_partial_sums(log_pts)
    else:
        log_cls, model = (CONVERGES if exhausted else INCONCLUSIVE), None
    len_final = len_pts[-1][1]
    len_deltas = [b - a for (_, a), (_, b) in zip(len_pts, len_pts[1:])]
    len_flat = all(d < 1e-6 * (1.0 + len_final) for d in len_deltas[-2:])
    null_confirmed = (1.0 - len_final) <= length_tol or (
        len_flat and (1.0 - len_final) <= math.sqrt(length_tol)
    )
    positive_measure = len_flat and (1.0 - len_final) > math.sqrt(length_tol)

    if log_cls == DIVERGES_MINUS or positive_measure:
        verdict = "not_carleson"
    elif log_cls == CONVERGES and null_confirmed:
        verdict = "carleson"
    else:
        verdict = "inconclusive"
    note = f"sum of lengths at N={cps[-1]}: {len_final:.9f}; log-series {log_cls}"
    return DivergenceReport(log_pts, verdict, note, limit=log_pts[-1][1])


def cantor_capacity_zero_test(
    lengths,
    alpha: float,
    checkpoints: Sequence[int] = (50, 100, 200, 400, 800),
) -> DivergenceReport:
    """Partial sums of sum 2^-n l_n^-alpha: divergence means capacity zero
    for the distance-power measure of the associated Cantor set."""
    if not (0.0 < alpha < 1.0):
        raise ValueError("alpha must lie in (0, 1)")
    rule = _as_rule(lengths)
    cps = sorted(int(c) for c in checkpoints)
    if len(cps) < 2 or cps[0] < 1:
        raise ValueError("need at least two positive checkpoints")
    ns = np.arange(1, cps[-1] + 1)
    # terms assembled in log space: 2^-n * l_n^-alpha can overflow directly
    log_terms = -ns * math.log(2.0) - alpha * rule.log_lengths(ns)
    terms = np.exp(log_terms)
    sums = np.cumsum(terms)
    pts = [(n, float(sums[n - 1])) for n in cps]
    cls, model = classify_partial_sums(pts)
    verdict = {
        DIVERGES_PLUS: "capacity_zero",
        CONVERGES: "capacity_positive",
    }.get(cls, "inconclusive")
    return DivergenceReport(pts, verdict, model)


# ---------------------------------------------------------------------------
# atom-cluster measures
# ---------------------------------------------------------------------------


def _zeta2_tail(k_max: int) -> float:
    """sum_{k > k_max} k^-2, exact to double precision."""
    return ZETA2_MINUS_1 + 1.0 - float(np.sum(1.0 / np.arange(2, k_max + 1) ** 2.0))


def _cluster_atoms(anchor: float, a: float, k_max: int):
    """Atoms (anchor + a^k, a/k^2) for k >= 2, dropping offsets that are not
    representable next to the anchor; returns (atoms, dropped_mass)."""
    atoms = []
    dropped = 0.0
    resolution = 4.0 * (np.spacing(abs(anchor)) if anchor != 0.0 else 0.0)
    for k in range(2, k_max + 1):
        off = a**k
        if off <= resolution or anchor + off == anchor:
            dropped += a / k**2
            continue
        atoms.append((anchor + off, a / k**2))
    return atoms, dropped


def lemcap_measure(zeta, a: float, k_max: int = 60) -> Measure:
    """Atom cluster a/k^2 at angles zeta + a^k (k >= 2), truncated at k_max.

    tail_bound covers both the k > k_max tail (a * sum of k^-2) and any
    dropped sub-resolution offsets.  All atoms lie within angular distance
    a^2 of the anchor.
    """
    if not (0.0 < a < 0.5):
        raise ValueError("a must lie in (0, 1/2)")
    if k_max < 10:
        raise ValueError("k_max must be >= 10")
    anchor = as_angle(zeta)
    atoms, dropped = _cluster_atoms(anchor, a, k_max)
    tail = a * _zeta2_tail(k_max) + dropped
    return Measure.build(atoms, tail_bound=tail)


class Um0Construction(NamedTuple):
    """Measure, uniqueness point angles, per-point arcs, and cluster scales."""

    measure: Measure
    points: list[float]
    arcs: list[Arc]
    a_values: np.ndarray


def um0_measure(
    epsilon: float = 0.01, n_max: int = 200, k_max: int = 60
) -> Um0Construction:
    """Atom clusters at theta_n = 1/log n with scales a_n = eps*(theta_n - theta_{n+1}).

    The cluster of generation n sits strictly inside (theta_n, theta_n + a_n),
    which itself sits inside the window I_n = (theta_n - a_n, theta_n + a_n);
    the windows are validated to be pairwise disjoint (EpsilonTooLarge
    otherwise).  The anchor points {theta_n} and the point at angle 0 carry no
    mass.  Exact untruncated total mass is eps * (pi^2/6 - 1) / log 3.
    """
    if epsilon <= 0:
        raise EpsilonTooLarge("epsilon must be positive")
    if n_max < 4 or k_max < 10:
        raise ValueError("need n_max >= 4 and k_max >= 10")
    ns = np.arange(3, n_max + 1, dtype=float)
    thetas = 1.0 / np.log(ns)
    a_vals = epsilon * (1.0 / np.log(ns) - 1.0 / np.log(ns + 1.0))

    atoms = []
    dropped = 0.0
    arcs = []
    for t, a in zip(thetas, a_vals):
        if a >= t:
            raise EpsilonTooLarge("window reaches past angle 0")
        cluster, d = _cluster_atoms(float(t), float(a), k_max)
        atoms.extend(cluster)
        dropped += d
        arcs.append(Arc(t - a, 2.0 * a))
    if not pairwise_disjoint(arcs):
        raise EpsilonTooLarge(f"epsilon = {epsilon} makes the windows overlap")
    theta_tail = 1.0 / math.log(n_max + 1.0)
    tail = epsilon * theta_tail * ZETA2_MINUS_1 + np.sum(a_vals) * _zeta2_tail(k_max) + dropped
    measure = Measure.build(atoms, tail_bound=float(tail))
    points = [0.0] + [float(t) for t in thetas]
    return Um0Construction(measure, points, arcs, a_vals)


def um0_exact_mass(epsilon: float) -> float:
    """Untruncated total mass eps*(pi^2/6 - 1)/log 3 (telescoping sum)."""
    return epsilon * ZETA2_MINUS_1 / math.log(3.0)


# ---------------------------------------------------------------------------
# gap-endpoint measures
# ---------------------------------------------------------------------------


def noncarleson_arc_measure(gaps: Sequence[Arc]) -> Measure:
    """Two atoms per complementary arc, each weighing the arc length."""
    if not pairwise_disjoint(list(gaps)):
        raise ValueError("gaps must be pairwise disjoint")
    atoms = []
    for g in gaps:
        atoms.append((g.start, g.length))
        atoms.append((g.start + g.length, g.length))
    return Measure.build(atoms)


def loglog_gap_arcs(n_max: int, n_min: int = 3) -> list[Arc]:
    """Complementary arcs of {1} plus the points at angles 1/log n, n >= n_min:
    the consecutive gaps (1/log(n+1), 1/log n) up to n_max and the long arc
    from 1/log(n_min) around to angle 0."""
    if n_max <= n_min:
        raise ValueError("n_max must exceed n_min")
    arcs = []
    for n in range(n_min, n_max + 1):
        hi = 1.0 / math.log(n)
        lo = 1.0 / math.log(n + 1)
        arcs.append(Arc(lo, hi - lo))
    big = TWO_PI - 1.0 / math.log(n_min)
    arcs.append(Arc(1.0 / math.log(n_min), big))
    return arcs


def noncarleson_guillot_sweep(
    n_maxes: Sequence[int] = (100, 300, 1000),
    n_panels: int = 1024,
    rtol: float = 1e-5,
) -> DivergenceReport:
    """Guillot values of the gap-endpoint measure at increasing truncation
    depths, classified as a partial-sum trend.

    Each truncated measure has an honest finite exclusion limit; divergence
    of the underlying construction shows up as the limits growing without
    flattening in the truncation depth.
    """
    pts = []
    for n_max in sorted(int(n) for n in n_maxes):
        mu = noncarleson_arc_measure(loglog_gap_arcs(n_max))
        rep = guillot_integral(mu, n_panels=n_panels, rtol=rtol)
        value = rep.limit if rep.limit is not None else rep.checkpoints[-1][1]
        pts.append((n_max, float(value)))
    cls, model = classify_partial_sums(pts)
    return DivergenceReport(pts, cls, model)


# ---------------------------------------------------------------------------
# the assembled criterion example
# ---------------------------------------------------------------------------


class CantorGapExample(NamedTuple):
    measure: Measure
    family: "object"  # ArcFamilySpec; typed loosely to avoid a cycle
    cap_rule: "object"  # PowerLawRule


def cantor_gap_example(
    alpha: float,
    lengths=4.0,
    n_max: int = 10**6,
    gamma: float = 2.0,
    prop_constant: float = 1.0,
    cantor_levels: int = 6,
) -> CantorGapExample:
    """Inputs for the criterion pipeline: a distance-power measure over a
    generalized Cantor base, the 1/log n arc family, and the per-arc capacity
    rule c(I_n) = prop_constant * |I_n|^alpha.

    Requires the capacity-zero series sum 2^-n l_n^-alpha to diverge
    (PreconditionSeriesConverges otherwise), so the assembled terms reduce to
    (1-alpha)|I_n| log|I_n| + O(|I_n|).
    """
    from .uniqueness import ArcFamilySpec, LogLogArcs, PowerLawRule

    rule = _as_rule(lengths)
    pre = cantor_capacity_zero_test(rule, alpha)
    if pre.classification != "capacity_zero":
        raise PreconditionSeriesConverges(
            f"capacity-zero series verdict: {pre.classification}"
        )
    base = Arc(math.pi - 0.5, 1.0)  # host the model set away from the arc family
    spec = CantorSpec(rule, cantor_levels, base)
    arcs = cantor_set(spec)
    density = DistancePowerDensity(alpha, arcs=[(a.start, a.length) for a in arcs])
    measure = Measure.build(density=density)
    family = ArcFamilySpec(LogLogArcs(n_min=2), gamma)
    cap_rule = PowerLawRule(prop_constant, alpha)
    return CantorGapExample(measure, family, cap_rule)

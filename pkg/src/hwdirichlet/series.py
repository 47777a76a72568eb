"""Partial-sum tracking and deterministic divergence classification.

A series is judged from its partial sums at geometrically spaced checkpoints.
The thresholds are fixed and documented here so every verdict in the package
is reproducible:

* ``converges``: the last two checkpoint increments satisfy
  |S_k - S_{k-1}| < 1e-6 * (1 + |S_last|).
* ``diverges_to_minus_infinity``: every increment is <= the convergence slack,
  and the last two per-decade rates (increment divided by log10(N_k/N_{k-1}))
  are below -0.01.
* ``diverges_to_plus_infinity``: mirror image of the above.
* otherwise ``inconclusive``.

Rates are measured per decade because the target series drift like log log N.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

CONVERGES = "converges"
DIVERGES_PLUS = "diverges_to_plus_infinity"
DIVERGES_MINUS = "diverges_to_minus_infinity"
INCONCLUSIVE = "inconclusive"

CONVERGE_RTOL = 1e-6
DRIFT_PER_DECADE = 0.01


@dataclass
class DivergenceReport:
    """Partial sums at checkpoints plus a deterministic trend verdict.

    ``checkpoints`` holds (N, S_N) pairs with strictly increasing N.  For
    quadrature-limit reports (shrinking exclusion radii), N counts the
    resolution 1/epsilon and ``limit`` carries the extrapolated value.
    """

    checkpoints: list[tuple[int, float]]
    classification: str
    fitted_model: str | None = None
    limit: float | None = None

    def to_dict(self) -> dict:
        d = {
            "checkpoints": [[int(n), float(s)] for n, s in self.checkpoints],
            "classification": self.classification,
        }
        if self.fitted_model is not None:
            d["fitted_model"] = self.fitted_model
        if self.limit is not None:
            d["limit"] = self.limit
        return d


def _loglog_slope(checkpoints: list[tuple[int, float]]) -> float | None:
    """Least-squares slope of S_N against log(log N), where defined."""
    xs, ys = [], []
    for n, s in checkpoints:
        if n >= 3:
            xs.append(math.log(math.log(n)))
            ys.append(s)
    if len(xs) < 2 or xs[-1] == xs[0]:
        return None
    mx = sum(xs) / len(xs)
    my = sum(ys) / len(ys)
    sxx = sum((x - mx) ** 2 for x in xs)
    if sxx == 0.0:
        return None
    return sum((x - mx) * (y - my) for x, y in zip(xs, ys)) / sxx


def classify_partial_sums(checkpoints: list[tuple[int, float]]) -> tuple[str, str | None]:
    """Classify a checkpointed partial-sum sequence.

    Returns (classification, fitted_model_description).
    """
    if len(checkpoints) < 2:
        return INCONCLUSIVE, None
    ns = [n for n, _ in checkpoints]
    if any(b <= a for a, b in zip(ns, ns[1:])):
        raise ValueError("checkpoints must be strictly increasing in N")
    s_last = checkpoints[-1][1]
    slack = CONVERGE_RTOL * (1.0 + abs(s_last))

    deltas = []
    rates = []
    for (n0, s0), (n1, s1) in zip(checkpoints, checkpoints[1:]):
        deltas.append(s1 - s0)
        rates.append((s1 - s0) / math.log10(n1 / n0))

    slope = _loglog_slope(checkpoints)
    model = None if slope is None else f"slope of S_N against log log N ~= {slope:.4g}"

    if all(abs(d) < slack for d in deltas[-2:]):
        return CONVERGES, model
    if all(d <= slack for d in deltas) and all(r < -DRIFT_PER_DECADE for r in rates[-2:]):
        return DIVERGES_MINUS, model
    if all(d >= -slack for d in deltas) and all(r > DRIFT_PER_DECADE for r in rates[-2:]):
        return DIVERGES_PLUS, model
    return INCONCLUSIVE, model


def report_from_partial_sums(checkpoints: list[tuple[int, float]]) -> DivergenceReport:
    cls, model = classify_partial_sums(checkpoints)
    return DivergenceReport(list(checkpoints), cls, model)

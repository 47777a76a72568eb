"""Adaptive panel quadrature with log-spaced refinement toward singularities.

Each panel is estimated with 15-point Gauss-Legendre and re-estimated on its
two halves; the difference is the panel error.  Panels whose error exceeds
their share of the budget are bisected, up to a hard cap of 2**20 panels.
Acceptance thresholds are *relative* (scale-invariant), so scaling the
integrand by a constant reproduces the same panel decisions up to rounding.

Panel sums are accumulated with numpy's fixed pairwise order over the sorted
panel list, so results are deterministic for identical inputs regardless of
any caller-side parallelism.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Iterable, NamedTuple

import numpy as np

MAX_PANELS = 1 << 20

_GL_X, _GL_W = np.polynomial.legendre.leggauss(15)


class Estimate(NamedTuple):
    """A computed value together with an error-bracket estimate."""

    value: float
    error: float


@dataclass
class QuadResult:
    value: float
    error: float
    panels: int
    converged: bool


def _nodes(lo: np.ndarray, hi: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Gauss-Legendre nodes/weights for a batch of panels, flattened."""
    half = 0.5 * (hi - lo)
    mid = 0.5 * (hi + lo)
    x = mid[:, None] + half[:, None] * _GL_X[None, :]
    w = half[:, None] * _GL_W[None, :]
    return x, w


def integrate(
    f: Callable[[np.ndarray], np.ndarray],
    edges: Iterable[float],
    rtol: float = 1e-9,
    atol: float = 0.0,
    max_panels: int = MAX_PANELS,
    max_rounds: int = 64,
) -> QuadResult:
    """Integrate a vectorized integrand over the panels defined by ``edges``."""
    e = np.unique(np.asarray(list(edges), dtype=float))
    if e.size < 2:
        raise ValueError("need at least two panel edges")
    lo = e[:-1].copy()
    hi = e[1:].copy()
    vals = np.empty(0)
    errs = np.empty(0)
    stale = np.ones(lo.size, dtype=bool)

    converged = False
    for _ in range(max_rounds):
        if stale.any():
            slo, shi = lo[stale], hi[stale]
            mid = 0.5 * (slo + shi)
            xc, wc = _nodes(slo, shi)
            xl, wl = _nodes(slo, mid)
            xr, wr = _nodes(mid, shi)
            fx = f(np.concatenate([xc.ravel(), xl.ravel(), xr.ravel()]))
            nc = xc.size
            fc = fx[:nc].reshape(xc.shape)
            fl = fx[nc : nc + xl.size].reshape(xl.shape)
            fr = fx[nc + xl.size :].reshape(xr.shape)
            coarse = np.sum(fc * wc, axis=1)
            fine = np.sum(fl * wl, axis=1) + np.sum(fr * wr, axis=1)
            new_vals = fine
            new_errs = np.abs(fine - coarse)
            if vals.size == 0:
                vals, errs = new_vals, new_errs
            else:
                vals = vals.copy()
                errs = errs.copy()
                vals[stale] = new_vals
                errs[stale] = new_errs

        total = float(np.sum(vals))
        err_total = float(np.sum(errs))
        scale = abs(total)
        if scale == 0.0:
            scale = float(np.max(np.abs(vals))) if vals.size else 0.0
        budget = rtol * scale + atol
        if err_total <= budget or (scale == 0.0 and err_total == 0.0):
            converged = True
            break
        if lo.size >= max_panels:
            break

        threshold = budget / (2.0 * lo.size) if budget > 0 else 0.0
        split = errs > threshold
        if not split.any():
            split = errs >= np.max(errs)
        n_new = lo.size + int(np.count_nonzero(split))
        if n_new > max_panels:
            # split only the worst offenders to stay under the cap
            k = max_panels - lo.size
            if k <= 0:
                break
            idx = np.argsort(errs)[::-1][:k]
            split = np.zeros(lo.size, dtype=bool)
            split[idx] = True
        mids = 0.5 * (lo[split] + hi[split])
        lo = np.concatenate([lo[~split], lo[split], mids])
        hi = np.concatenate([hi[~split], mids, hi[split]])
        vals = np.concatenate([vals[~split], np.zeros(2 * mids.size)])
        errs = np.concatenate([errs[~split], np.zeros(2 * mids.size)])
        stale = np.zeros(lo.size, dtype=bool)
        stale[lo.size - 2 * mids.size :] = True
        order = np.argsort(lo, kind="stable")
        lo, hi, vals, errs, stale = lo[order], hi[order], vals[order], errs[order], stale[order]

    total = float(np.sum(vals))
    err_total = float(np.sum(errs))
    return QuadResult(total, err_total, lo.size, converged)


def ladder(inner: float, outer: float, factor: float = 2.0) -> np.ndarray:
    """Geometric ladder of offsets inner, inner*factor, ... capped at outer."""
    if inner <= 0 or outer <= inner:
        return np.array([outer])
    n = int(math.ceil(math.log(outer / inner) / math.log(factor)))
    vals = inner * factor ** np.arange(n + 1)
    vals = vals[vals < outer]
    return np.append(vals, outer)


def edges_with_anchors(
    a: float,
    b: float,
    anchors: Iterable[tuple[float, float]] = (),
    max_span: float | None = None,
) -> np.ndarray:
    """Panel edges for [a, b] with geometric clustering toward each anchor.

    ``anchors`` are (position, inner_scale) pairs; ladders of edges approach
    each anchor from both sides down to inner_scale.  Anchors may coincide
    with the interval endpoints.  ``max_span`` optionally bounds the size of
    unrefined panels.
    """
    if not b > a:
        raise ValueError("empty interval")
    pts = {a, b}
    span = b - a
    for pos, inner in anchors:
        inner = max(inner, span * 1e-15)
        if a < pos < b:
            pts.add(pos)
        for off in ladder(inner, max(pos - a, inner)):
            if a < pos - off < b:
                pts.add(pos - off)
        for off in ladder(inner, max(b - pos, inner)):
            if a < pos + off < b:
                pts.add(pos + off)
    edges = np.array(sorted(pts))
    if max_span is not None and max_span > 0:
        out = [edges[0]]
        for e in edges[1:]:
            while e - out[-1] > max_span * (1 + 1e-12):
                n_sub = int(math.ceil((e - out[-1]) / max_span))
                out.append(out[-1] + (e - out[-1]) / n_sub)
            out.append(e)
        edges = np.array(out)
    # drop near-duplicate edges
    keep = np.concatenate([[True], np.diff(edges) > 1e-15 * max(1.0, abs(a), abs(b))])
    return edges[keep]

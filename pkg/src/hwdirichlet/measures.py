"""Finite positive Borel measures on the circle and their potentials.

A measure is a finite atom list plus one density from a closed family of
weight functions against normalized arc measure dm = dtheta/(2*pi), together
with a ``tail_bound`` on the total mass of atoms truncated away by an
infinite construction.  Potentials report rigorous-style error brackets that
include the tail contribution, never a bare value.

All stored integrals use the dm normalization; the CLI exposes the raw
dtheta convention behind an explicit flag.  Measures are immutable; potential
evaluations are pure, and panel sums use a fixed summation order so results
are deterministic.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

from . import _kernels
from .errors import OutsideDisc, PrecisionLoss
from .geometry import ANGLE_TOL, TWO_PI, as_angle, normalize_angle
from .quadrature import Estimate, QuadResult, edges_with_anchors, integrate
from .series import CONVERGES, DIVERGES_PLUS, INCONCLUSIVE, DivergenceReport


# ---------------------------------------------------------------------------
# densities
# ---------------------------------------------------------------------------


class Density:
    """Weight function against dm; subclasses form a closed family."""

    kind = "abstract"

    def eval(self, thetas: np.ndarray) -> np.ndarray:
        raise NotImplementedError

    def breakpoints(self) -> np.ndarray:
        """Angles where the weight may be non-smooth."""
        return np.empty(0)

    def is_zero(self) -> bool:
        return False

    def zero_margin(self, theta: float) -> float:
        """Radius of an angular neighborhood of theta where the weight is
        identically zero (0.0 if none); used for integrability checks."""
        return 0.0

    def to_dict(self) -> dict:
        raise NotImplementedError


class ZeroDensity(Density):
    kind = "zero"

    def eval(self, thetas):
        return np.zeros(np.asarray(thetas).shape)

    def is_zero(self):
        return True

    def zero_margin(self, theta):
        return math.pi

    def to_dict(self):
        return {"kind": "zero"}


class ConstantDensity(Density):
    kind = "constant"

    def __init__(self, c: float):
        c = float(c)
        if c < 0:
            raise ValueError("constant density must be nonnegative")
        self.c = c

    def eval(self, thetas):
        return np.full(np.asarray(thetas).shape, self.c)

    def is_zero(self):
        return self.c == 0.0

    def zero_margin(self, theta):
        return math.pi if self.c == 0.0 else 0.0

    def to_dict(self):
        return {"kind": "constant", "c": self.c}


class DistancePowerDensity(Density):
    """Weight dist(e^{i*theta}, B)^alpha for a base set B of points and arcs.

    Distances are Euclidean (chordal).  The base set is stored as closed
    angular intervals [lo, hi] (points are degenerate intervals); wrapping
    arcs are split at 0.
    """

    kind = "distance_power"

    def __init__(
        self,
        alpha: float,
        points: Sequence[float] = (),
        arcs: Sequence[tuple[float, float]] = (),
    ):
        alpha = float(alpha)
        if not (0.0 < alpha < 1.0):
            raise ValueError("alpha must lie in (0, 1)")
        self.alpha = alpha
        self._points = tuple(normalize_angle(float(p)) for p in points)
        self._arcs = tuple((normalize_angle(float(s)), float(l)) for s, l in arcs)
        los, his = [], []
        for p in self._points:
            los.append(p)
            his.append(p)
        for s, l in self._arcs:
            if l <= 0 or l >= TWO_PI:
                raise ValueError("base arc length must be in (0, 2*pi)")
            e = s + l
            if e <= TWO_PI:
                los.append(s)
                his.append(e)
            else:  # split a wrapping arc at angle 0
                los.append(s)
                his.append(TWO_PI)
                los.append(0.0)
                his.append(e - TWO_PI)
        if not los:
            raise ValueError("distance-power density needs a nonempty base set")
        order = np.argsort(los)
        self._lo = np.asarray(los, dtype=float)[order]
        self._hi = np.asarray(his, dtype=float)[order]

    def distance(self, thetas: np.ndarray) -> np.ndarray:
        """Chordal distance from e^{i*theta} to the base set."""
        th = np.mod(np.asarray(thetas, dtype=float), TWO_PI)
        idx = np.searchsorted(self._lo, th, side="right")
        n = self._lo.size
        left = (idx - 1) % n
        right = idx % n
        # gap to the interval ending at hi[left] (going clockwise)
        d_left = np.mod(th - self._hi[left], TWO_PI)
        # gap to the interval starting at lo[right] (going counterclockwise)
        d_right = np.mod(self._lo[right] - th, TWO_PI)
        inside = (np.mod(th - self._lo[left], TWO_PI)) <= (
            np.mod(self._hi[left] - self._lo[left], TWO_PI)
        )
        ang = np.minimum(d_left, d_right)
        dist = 2.0 * np.abs(np.sin(0.5 * ang))
        dist[inside] = 0.0
        return dist

    def eval(self, thetas):
        return self.distance(thetas) ** self.alpha

    def breakpoints(self):
        return np.unique(np.concatenate([self._lo, self._hi]))

    def zero_margin(self, theta):
        th = normalize_angle(theta)
        margin = 0.0
        for lo, hi in zip(self._lo, self._hi):
            if hi - lo <= 0:
                continue
            if lo + ANGLE_TOL < th < hi - ANGLE_TOL:
                margin = max(margin, min(th - lo, hi - th))
        return margin

    def to_dict(self):
        return {
            "kind": "distance_power",
            "alpha": self.alpha,
            "points": list(self._points),
            "arcs": [{"start": s, "length": l} for s, l in self._arcs],
        }


class TabulatedDensity(Density):
    """Samples on a uniform grid over [0, 2*pi) with periodic interpolation."""

    kind = "tabulated"

    def __init__(self, values: Sequence[float], interpolation: str = "linear"):
        v = np.asarray(values, dtype=float)
        if v.ndim != 1 or v.size < 2:
            raise ValueError("need a 1-d grid of at least 2 samples")
        if (v < 0).any():
            raise ValueError("tabulated density must be nonnegative")
        if interpolation not in ("linear", "nearest"):
            raise ValueError(f"unknown interpolation rule {interpolation!r}")
        self.values = v
        self.interpolation = interpolation

    def eval(self, thetas):
        th = np.mod(np.asarray(thetas, dtype=float), TWO_PI)
        m = self.values.size
        pos = th * m / TWO_PI
        if self.interpolation == "nearest":
            return self.values[np.round(pos).astype(int) % m]
        i0 = np.floor(pos).astype(int) % m
        frac = pos - np.floor(pos)
        return self.values[i0] * (1 - frac) + self.values[(i0 + 1) % m] * frac

    def breakpoints(self):
        m = self.values.size
        return np.arange(m) * TWO_PI / m

    def zero_margin(self, theta):
        m = self.values.size
        h = TWO_PI / m
        i = int(normalize_angle(theta) / h)
        # zero neighborhood requires the surrounding interpolation nodes to vanish
        if self.values[i % m] == 0.0 and self.values[(i + 1) % m] == 0.0:
            lo, hi = i, i + 1
            while self.values[(lo - 1) % m] == 0.0 and hi - lo < m:
                lo -= 1
            while self.values[(hi + 1) % m] == 0.0 and hi - lo < m:
                hi += 1
            t = normalize_angle(theta)
            return max(0.0, min(t - (lo * h), (hi * h) - t))
        return 0.0

    def to_dict(self):
        return {
            "kind": "tabulated",
            "values": [float(x) for x in self.values],
            "interpolation": self.interpolation,
        }


ZERO_DENSITY = ZeroDensity()


def density_from_dict(d: dict) -> Density:
    kind = d.get("kind")
    if kind == "zero":
        _check_keys(d, {"kind"})
        return ZERO_DENSITY
    if kind == "constant":
        _check_keys(d, {"kind", "c"})
        return ConstantDensity(d["c"])
    if kind == "distance_power":
        _check_keys(d, {"kind", "alpha", "points", "arcs"})
        arcs = [(a["start"], a["length"]) for a in d.get("arcs", [])]
        return DistancePowerDensity(d["alpha"], d.get("points", []), arcs)
    if kind == "tabulated":
        _check_keys(d, {"kind", "values", "interpolation"})
        return TabulatedDensity(d["values"], d.get("interpolation", "linear"))
    raise ValueError(f"unknown density kind {kind!r}")


def _check_keys(d: dict, allowed: set) -> None:
    unknown = set(d) - allowed
    if unknown:
        raise ValueError(f"unknown keys: {sorted(unknown)}")


# ---------------------------------------------------------------------------
# measures
# ---------------------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class Measure:
    """Atoms + density + a bound on the mass truncated from infinite sums."""

    atom_angles: np.ndarray
    atom_masses: np.ndarray
    density: Density = field(default_factory=lambda: ZERO_DENSITY)
    tail_bound: float = 0.0

    def __post_init__(self):
        a = np.asarray(self.atom_angles, dtype=float)
        m = np.asarray(self.atom_masses, dtype=float)
        a.setflags(write=False)
        m.setflags(write=False)
        object.__setattr__(self, "atom_angles", a)
        object.__setattr__(self, "atom_masses", m)
        if self.tail_bound < 0:
            raise ValueError("tail_bound must be nonnegative")

    @staticmethod
    def build(
        atoms: Iterable[tuple[float, float]] = (),
        density: Density | None = None,
        tail_bound: float = 0.0,
    ) -> "Measure":
        """Normalize, sort, and merge duplicate atom angles (tolerance 1e-12)."""
        angles, masses = [], []
        for theta, mass in atoms:
            mass = float(mass)
            if mass <= 0:
                raise ValueError(f"atom masses must be positive, got {mass}")
            angles.append(as_angle(theta))
            masses.append(mass)
        a = np.asarray(angles, dtype=float)
        m = np.asarray(masses, dtype=float)
        if a.size:
            order = np.argsort(a, kind="stable")
            a, m = a[order], m[order]
            keep_a, keep_m = [a[0]], [m[0]]
            for t, w in zip(a[1:], m[1:]):
                if t - keep_a[-1] <= ANGLE_TOL:
                    keep_m[-1] += w
                else:
                    keep_a.append(t)
                    keep_m.append(w)
            if len(keep_a) > 1 and (TWO_PI - keep_a[-1] + keep_a[0]) <= ANGLE_TOL:
                keep_m[0] += keep_m.pop()
                keep_a.pop()
            a = np.asarray(keep_a)
            m = np.asarray(keep_m)
        return Measure(a, m, density if density is not None else ZERO_DENSITY, tail_bound)

    @staticmethod
    def lebesgue() -> "Measure":
        """Normalized arc measure dm."""
        return Measure.build(density=ConstantDensity(1.0))

    @staticmethod
    def point(theta, mass: float = 1.0) -> "Measure":
        return Measure.build([(theta, mass)])

    @property
    def n_atoms(self) -> int:
        return int(self.atom_angles.size)

    def is_atomic(self) -> bool:
        return self.density.is_zero()

    def rotated(self, phi: float) -> "Measure":
        density = self.density
        if isinstance(density, DistancePowerDensity):
            density = DistancePowerDensity(
                density.alpha,
                [p + phi for p in density._points],
                [(s + phi, l) for s, l in density._arcs],
            )
        elif isinstance(density, TabulatedDensity) and phi != 0.0:
            raise NotImplementedError("rotation of tabulated densities")
        return Measure.build(
            [(t + phi, w) for t, w in zip(self.atom_angles, self.atom_masses)],
            density,
            self.tail_bound,
        )

    def scaled(self, t: float) -> "Measure":
        if t <= 0:
            raise ValueError("scale factor must be positive")
        density = self.density
        if isinstance(density, ConstantDensity):
            density = ConstantDensity(t * density.c)
        elif isinstance(density, TabulatedDensity):
            density = TabulatedDensity(t * density.values, density.interpolation)
        elif not density.is_zero():
            raise NotImplementedError(f"scaling of {density.kind} densities")
        return Measure(
            self.atom_angles, t * self.atom_masses, density, t * self.tail_bound
        )

    def to_dict(self) -> dict:
        return {
            "atoms": [
                {"theta": float(t), "mass": float(w)}
                for t, w in zip(self.atom_angles, self.atom_masses)
            ],
            "density": self.density.to_dict(),
            "tail_bound": float(self.tail_bound),
        }

    @staticmethod
    def from_dict(d: dict) -> "Measure":
        _check_keys(d, {"atoms", "density", "tail_bound"})
        atoms = []
        for a in d.get("atoms", []):
            _check_keys(a, {"theta", "mass"})
            atoms.append((a["theta"], a["mass"]))
        density = density_from_dict(d.get("density", {"kind": "zero"}))
        return Measure.build(atoms, density, float(d.get("tail_bound", 0.0)))


def combine(m1: Measure, m2: Measure) -> Measure:
    """Sum of two measures; at most one may carry a non-constant density."""
    d1, d2 = m1.density, m2.density
    if d1.is_zero():
        density = d2
    elif d2.is_zero():
        density = d1
    elif isinstance(d1, ConstantDensity) and isinstance(d2, ConstantDensity):
        density = ConstantDensity(d1.c + d2.c)
    elif isinstance(d2, ConstantDensity) or isinstance(d1, ConstantDensity):
        raise NotImplementedError("cannot combine a constant with a structured density")
    else:
        raise NotImplementedError("cannot combine two structured densities")
    atoms = [(t, w) for t, w in zip(m1.atom_angles, m1.atom_masses)]
    atoms += [(t, w) for t, w in zip(m2.atom_angles, m2.atom_masses)]
    return Measure.build(atoms, density, m1.tail_bound + m2.tail_bound)


# ---------------------------------------------------------------------------
# density integration helpers
# ---------------------------------------------------------------------------

_DENSITY_MASS_CACHE: dict[int, tuple[float, float]] = {}


def _density_edges(density: Density, extra_anchors=(), start: float | None = None):
    """Initial panel edges over one period, seeded at density breakpoints."""
    bps = np.asarray(density.breakpoints(), dtype=float)
    if start is None:
        start = float(bps[0]) if bps.size else 0.0
    lo, hi = start, start + TWO_PI
    pts = {lo, hi}
    for b in bps:
        x = lo + math.fmod(b - lo, TWO_PI)
        if x < lo:
            x += TWO_PI
        if lo < x < hi:
            pts.add(x)
    edges = np.array(sorted(pts))
    anchors = []
    for pos, scale in extra_anchors:
        p = lo + math.fmod(pos - lo, TWO_PI)
        if p < lo:
            p += TWO_PI
        anchors.append((p, scale))
    if anchors:
        combined = set(edges.tolist())
        for seg_lo, seg_hi in zip(edges[:-1], edges[1:]):
            for p, scale in anchors:
                if seg_lo - ANGLE_TOL <= p <= seg_hi + ANGLE_TOL:
                    sub = edges_with_anchors(seg_lo, seg_hi, [(p, scale)])
                    combined.update(sub.tolist())
        edges = np.array(sorted(combined))
    return edges


def density_mass(density: Density, rtol: float = 1e-12) -> Estimate:
    """Integral of the weight against dm, with a quadrature error estimate."""
    if density.is_zero():
        return Estimate(0.0, 0.0)
    if isinstance(density, ConstantDensity):
        return Estimate(density.c, 0.0)
    if isinstance(density, TabulatedDensity) and density.interpolation == "linear":
        # periodic trapezoid is exact for piecewise-linear samples
        return Estimate(float(np.mean(density.values)), 0.0)
    key = id(density)
    cached = _DENSITY_MASS_CACHE.get(key)
    if cached is not None and cached[1] <= rtol:
        return Estimate(*cached[0])
    edges = _density_edges(density)
    res = integrate(lambda th: density.eval(th), edges, rtol=rtol)
    est = (res.value / TWO_PI, res.error / TWO_PI)
    _DENSITY_MASS_CACHE[key] = (est, rtol)
    return Estimate(*est)


# ---------------------------------------------------------------------------
# operations
# ---------------------------------------------------------------------------


def total_mass(mu: Measure, rtol: float = 1e-12) -> Estimate:
    """Atom masses plus the density integral; error includes the tail bound."""
    atoms = float(np.sum(mu.atom_masses))
    dens = density_mass(mu.density, rtol)
    return Estimate(atoms + dens.value, dens.error + mu.tail_bound)


def _as_disc_point(z) -> complex:
    z = complex(z)
    if abs(z) >= 1.0:
        raise OutsideDisc(f"|z| = {abs(z)} is not < 1")
    return z


def poisson(mu: Measure, z, rtol: float = 1e-9) -> Estimate:
    """Poisson integral of the measure at a point strictly inside the disc.

    Atoms are summed exactly through the kernel; the density is integrated by
    adaptive panels geometrically refined toward the angular position of z.
    The reported error adds the truncated-tail contribution, which the kernel
    bounds by tail_bound * (1+|z|)/(1-|z|).
    """
    z = _as_disc_point(z)
    r = abs(z)
    phi = math.atan2(z.imag, z.real)
    value = 0.0
    err = 0.0
    if mu.n_atoms:
        value += float(
            _kernels.poisson_at(
                np.array([r]), np.array([phi]), mu.atom_angles, mu.atom_masses
            )[0]
        )
    if not mu.density.is_zero():
        if isinstance(mu.density, ConstantDensity):
            value += mu.density.c  # Poisson kernel has dm-mean exactly 1
        else:
            density = mu.density
            scale = max((1.0 - r) / 8.0, 1e-14)
            edges = _density_edges(density, extra_anchors=[(phi, scale)], start=phi - math.pi)

            def integrand(th):
                k = (1.0 - r * r) / (1.0 - 2.0 * r * np.cos(th - phi) + r * r)
                return density.eval(th) * k

            res = integrate(integrand, edges, rtol=rtol)
            if not res.converged:
                raise PrecisionLoss(
                    f"poisson density quadrature stalled at error {res.error:.3g}"
                )
            value += res.value / TWO_PI
            err += res.error / TWO_PI
    err += mu.tail_bound * (1.0 + r) / (1.0 - r)
    return Estimate(value, err)


def poisson_ray_values(
    mu: Measure, zeta, xs: np.ndarray, rtol: float = 1e-9
) -> np.ndarray:
    """P_mu((1-x) e^{i zeta}) for an array of radial offsets x in (0, 1].

    This is the hot path of the capacity integrals: atoms go through one
    kernel call over the whole grid; a constant density adds c exactly;
    structured densities fall back to one adaptive quadrature per node.
    """
    zeta = as_angle(zeta)
    xs = np.asarray(xs, dtype=float)
    out = np.zeros(xs.shape)
    if mu.n_atoms:
        out += _kernels.poisson_ray(xs, mu.atom_angles, mu.atom_masses, zeta)
    d = mu.density
    if d.is_zero():
        return out
    if isinstance(d, ConstantDensity):
        return out + d.c
    for i, x in enumerate(xs.ravel()):
        z = (1.0 - x) * complex(math.cos(zeta), math.sin(zeta))
        out.ravel()[i] += poisson(
            Measure(np.empty(0), np.empty(0), d, 0.0), z, rtol=rtol
        ).value
    return out


def newtonian_potential(mu: Measure, zeta) -> float:
    """Potential with the squared-chord kernel; +inf is a value, not an error.

    Returns math.inf when zeta collides with an atom or when the density does
    not vanish identically in a neighborhood of zeta (the kernel is not
    integrable there).
    """
    t = as_angle(zeta)
    value = 0.0
    if mu.n_atoms:
        d = np.abs(np.mod(mu.atom_angles - t + math.pi, TWO_PI) - math.pi)
        if float(np.min(d)) <= ANGLE_TOL:
            return math.inf
        value += float(_kernels.newton_values(np.array([t]), mu.atom_angles, mu.atom_masses)[0])
    density = mu.density
    if not density.is_zero():
        margin = density.zero_margin(t)
        if margin <= ANGLE_TOL:
            return math.inf
        delta = 0.5 * margin

        def integrand(th):
            s = np.sin(0.5 * (th - t))
            return density.eval(th) / (4.0 * s * s)

        edges = _density_edges(density, extra_anchors=[(t, delta)], start=t + delta)
        # restrict to [t+delta, t+2*pi-delta]; the excluded ball carries zero weight
        edges = edges[(edges >= t + delta - 1e-15) & (edges <= t + TWO_PI - delta + 1e-15)]
        edges = np.unique(np.concatenate([[t + delta, t + TWO_PI - delta], edges]))
        res = integrate(integrand, edges, rtol=1e-10)
        value += res.value / TWO_PI
    return value


def _guillot_atoms(
    mu: Measure, n_panels: int, rtol: float
) -> tuple[list[tuple[int, float]], list[float]]:
    """Exclusion-schedule values of the log-potential integral (dm units)."""
    th = np.sort(mu.atom_angles)
    n = th.size
    gaps = np.diff(np.concatenate([th, [th[0] + TWO_PI]]))
    min_gap = float(np.min(gaps))
    eps0 = min(min_gap / 4.0, math.pi / 8.0)
    levels = max(6, int(round(math.log2(n_panels))) - 6)

    masses = mu.atom_masses[np.argsort(mu.atom_angles)]

    def log_v2(ts):
        v = _kernels.newton_values(ts, th, masses)
        return np.log(v)

    total = 0.0
    # base region: each inter-atom gap minus the eps0-balls at both ends
    for i in range(n):
        a = th[i] + eps0
        b = th[i] + gaps[i] - eps0
        if b - a <= 1e-15:
            continue
        edges = edges_with_anchors(a, b, [(th[i], eps0), (th[i] + gaps[i], eps0)])
        res = integrate(log_v2, edges, rtol=rtol, max_rounds=24)
        total += res.value

    values = [total / TWO_PI]
    eps = eps0
    for _ in range(levels):
        inc = 0.0
        for i in range(n):
            for lo, hi in ((th[i] + 0.5 * eps, th[i] + eps), (th[i] - eps, th[i] - 0.5 * eps)):
                res = integrate(log_v2, np.linspace(lo, hi, 4), rtol=rtol, max_rounds=10)
                inc += res.value
        eps *= 0.5
        values.append(values[-1] + inc / TWO_PI)
    checkpoints = [(2**j, v) for j, v in enumerate(values)]
    return checkpoints, values


def guillot_integral(mu: Measure, n_panels: int = 4096, rtol: float = 1e-8) -> DivergenceReport:
    """Integral of log V2 over the circle (dm units) under shrinking exclusions.

    Neighborhoods of radius eps0 * 2^-j around each atom are excluded and the
    value sequence is classified: geometric decay of the increments (last
    three ratios <= 0.85) means a finite limit, which is then extrapolated;
    persistently non-decaying increments (ratios >= 0.97) mean divergence to
    +inf.  Densities with positive mass make V2 infinite on a set of positive
    measure, so those classify as divergent immediately.
    """
    if n_panels < 16:
        raise ValueError("n_panels must be >= 16")
    if not mu.density.is_zero() and density_mass(mu.density).value > 0:
        return DivergenceReport(
            [], DIVERGES_PLUS, "density makes V2 infinite on a set of positive measure"
        )
    if mu.n_atoms == 0:
        return DivergenceReport([(1, 0.0)], CONVERGES, None, limit=0.0)

    checkpoints, values = _guillot_atoms(mu, n_panels, rtol)
    deltas = np.diff(values)
    slack = 1e-15 * (1.0 + abs(values[-1]))
    if np.all(np.abs(deltas[-3:]) < slack):
        return DivergenceReport(checkpoints, CONVERGES, None, limit=values[-1])
    ratios = []
    for a, b in zip(deltas[:-1], deltas[1:]):
        ratios.append(abs(b) / abs(a) if abs(a) > 0 else math.inf)
    tail3 = ratios[-3:]
    if all(r <= 0.85 for r in tail3):
        rho = min(0.85, sum(ratios[-2:]) / 2.0)
        limit = values[-1] + deltas[-1] * rho / (1.0 - rho)
        return DivergenceReport(checkpoints, CONVERGES, None, limit=float(limit))
    if all(r >= 0.97 for r in tail3):
        return DivergenceReport(checkpoints, DIVERGES_PLUS, None)
    return DivergenceReport(checkpoints, INCONCLUSIVE, None)


def measure_modes(mu: Measure, kmax: int, rtol: float = 1e-10) -> np.ndarray:
    """Fourier coefficients mu_hat_k = integral of e^{-i k theta} d mu, k=0..kmax."""
    ks = np.arange(kmax + 1)
    modes = np.zeros(kmax + 1, dtype=complex)
    if mu.n_atoms:
        modes += np.sum(
            mu.atom_masses[None, :] * np.exp(-1j * ks[:, None] * mu.atom_angles[None, :]),
            axis=1,
        )
    d = mu.density
    if d.is_zero():
        return modes
    if isinstance(d, ConstantDensity):
        modes[0] += d.c
        return modes
    edges = _density_edges(d)
    for k in ks:
        re = integrate(lambda th: d.eval(th) * np.cos(k * th), edges, rtol=rtol, atol=1e-14)
        im = integrate(lambda th: d.eval(th) * np.sin(k * th), edges, rtol=rtol, atol=1e-14)
        modes[k] += (re.value - 1j * im.value) / TWO_PI
    return modes

"""Analytic function representations and Dirichlet-type energies.

Functions are restricted to a closed family with closed-form derivatives:
polynomials, rational functions with all poles outside the closed disc, and
Blaschke products (zeros inside the disc) multiplied by a polynomial.  That
family is dense enough for every probe in this package while staying exactly
evaluable on the closed disc.

Derivatives come from 2-jet arithmetic (value, f', f''), which keeps the
difference-quotient integrands well conditioned near the diagonal: when the
chord |zeta - xi| falls below 1e-6 the quotient switches to its two-term
Taylor form (see _kernels.dq_values).
"""

from __future__ import annotations

import math
from typing import Sequence

import numpy as np

from . import _kernels
from .errors import PrecisionLoss
from .geometry import TWO_PI, Arc, as_angle
from .measures import ConstantDensity, Measure, density_mass, measure_modes, _density_edges
from .quadrature import edges_with_anchors, integrate

_POLE_MARGIN = 1e-9


def _jet_mul(a, b):
    v = a[0] * b[0]
    d1 = a[1] * b[0] + a[0] * b[1]
    d2 = a[2] * b[0] + 2.0 * a[1] * b[1] + a[0] * b[2]
    return v, d1, d2


def _jet_div(p, q):
    v = p[0] / q[0]
    d1 = (p[1] - v * q[1]) / q[0]
    d2 = (p[2] - 2.0 * d1 * q[1] - v * q[2]) / q[0]
    return v, d1, d2


def _poly_jet(coeffs: np.ndarray, z):
    z = np.asarray(z, dtype=complex)
    p0 = np.zeros(z.shape, dtype=complex)
    p1 = np.zeros(z.shape, dtype=complex)
    p2 = np.zeros(z.shape, dtype=complex)
    for c in coeffs[::-1]:
        p2 = p2 * z + 2.0 * p1
        p1 = p1 * z + p0
        p0 = p0 * z + c
    return p0, p1, p2


class BoundaryFunction:
    """Base class: evaluable with two derivatives on the closed unit disc."""

    kind = "abstract"

    def jet(self, z) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
        raise NotImplementedError

    def value(self, z):
        return self.jet(z)[0]

    def derivative(self, z):
        return self.jet(z)[1]

    def boundary_values(self, thetas: np.ndarray) -> np.ndarray:
        return self.value(np.exp(1j * np.asarray(thetas, dtype=float)))

    def l2_norm_sq(self, tol: float = 1e-10) -> float:
        """Squared L2(dm) norm of the boundary values."""
        res = integrate(
            lambda th: np.abs(self.boundary_values(th)) ** 2,
            np.linspace(0.0, TWO_PI, 33),
            rtol=tol,
        )
        return res.value / TWO_PI

    def circle_zero_angles(self) -> list[float]:
        """Angles of zeros lying on the unit circle (quadrature anchors)."""
        return []

    def scaled(self, c: complex) -> "BoundaryFunction":
        raise NotImplementedError

    def rotated(self, phi: float) -> "BoundaryFunction":
        """The function z -> f(e^{-i phi} z) (up to a unimodular factor)."""
        raise NotImplementedError

    def to_dict(self) -> dict:
        raise NotImplementedError


def _roots_on_circle(coeffs: np.ndarray) -> list[float]:
    if coeffs.size < 2:
        return []
    c = np.trim_zeros(coeffs, "b")
    if c.size < 2:
        return []
    roots = np.roots(c[::-1])
    return [float(np.angle(r) % TWO_PI) for r in roots if abs(abs(r) - 1.0) < 1e-9]


class Polynomial(BoundaryFunction):
    kind = "poly"

    def __init__(self, coeffs: Sequence[complex]):
        c = np.asarray(coeffs, dtype=complex)
        if c.ndim != 1 or c.size == 0:
            raise ValueError("coefficients must be a nonempty 1-d sequence")
        self.coeffs = c

    def jet(self, z):
        return _poly_jet(self.coeffs, z)

    def value(self, z):
        z = np.asarray(z, dtype=complex)
        out = np.zeros(z.shape, dtype=complex)
        for c in self.coeffs[::-1]:
            out = out * z + c
        return out

    def deriv_coeffs(self) -> np.ndarray:
        n = self.coeffs.size
        if n == 1:
            return np.zeros(1, dtype=complex)
        return self.coeffs[1:] * np.arange(1, n)

    def l2_norm_sq(self, tol: float = 1e-10) -> float:
        return float(np.sum(np.abs(self.coeffs) ** 2))

    def circle_zero_angles(self):
        return _roots_on_circle(self.coeffs)

    def scaled(self, c):
        return Polynomial(c * self.coeffs)

    def rotated(self, phi):
        n = np.arange(self.coeffs.size)
        return Polynomial(self.coeffs * np.exp(-1j * phi * n))

    def to_dict(self):
        return {"kind": "poly", "coeffs": [[c.real, c.imag] for c in self.coeffs]}


def monomial(n: int) -> Polynomial:
    """The function z^n."""
    c = np.zeros(n + 1, dtype=complex)
    c[n] = 1.0
    return Polynomial(c)


class RationalFunction(BoundaryFunction):
    """p(z)/q(z) with every root of q of modulus > 1 + 1e-9."""

    kind = "rational"

    def __init__(self, num: Sequence[complex], den: Sequence[complex]):
        self.num = np.asarray(num, dtype=complex)
        self.den = np.asarray(den, dtype=complex)
        if self.den.size == 0 or not np.any(self.den):
            raise ValueError("denominator must be nonzero")
        d = np.trim_zeros(self.den, "b")
        if d.size > 1:
            radii = np.abs(np.roots(d[::-1]))
            if np.any(radii <= 1.0 + _POLE_MARGIN):
                raise ValueError(
                    f"denominator roots must have modulus > 1+{_POLE_MARGIN}, "
                    f"got min {radii.min():.6g}"
                )

    def jet(self, z):
        return _jet_div(_poly_jet(self.num, z), _poly_jet(self.den, z))

    def circle_zero_angles(self):
        return _roots_on_circle(self.num)

    def scaled(self, c):
        return RationalFunction(c * self.num, self.den)

    def rotated(self, phi):
        n = np.arange(self.num.size)
        m = np.arange(self.den.size)
        return RationalFunction(
            self.num * np.exp(-1j * phi * n), self.den * np.exp(-1j * phi * m)
        )

    def to_dict(self):
        return {
            "kind": "rational",
            "num": [[c.real, c.imag] for c in self.num],
            "den": [[c.real, c.imag] for c in self.den],
        }


class BlaschkePoly(BoundaryFunction):
    """Product of Blaschke factors (a - z)/(1 - conj(a) z) times a polynomial."""

    kind = "blaschke_poly"

    def __init__(self, zeros: Sequence[complex], poly: Polynomial | Sequence[complex] = (1.0,)):
        self.zeros = [complex(a) for a in zeros]
        for a in self.zeros:
            if abs(a) >= 1.0:
                raise ValueError(f"Blaschke zeros must lie inside the disc, got |a|={abs(a)}")
        self.poly = poly if isinstance(poly, Polynomial) else Polynomial(poly)

    def jet(self, z):
        z = np.asarray(z, dtype=complex)
        acc = _poly_jet(self.poly.coeffs, z)
        one = np.ones(z.shape, dtype=complex)
        zero = np.zeros(z.shape, dtype=complex)
        for a in self.zeros:
            num = (a - z, -one, zero)
            den = (1.0 - np.conj(a) * z, -np.conj(a) * one, zero)
            acc = _jet_mul(acc, _jet_div(num, den))
        return acc

    def circle_zero_angles(self):
        return self.poly.circle_zero_angles()

    def scaled(self, c):
        return BlaschkePoly(self.zeros, self.poly.scaled(c))

    def rotated(self, phi):
        return BlaschkePoly(
            [a * np.exp(1j * phi) for a in self.zeros], self.poly.rotated(phi)
        )

    def to_dict(self):
        return {
            "kind": "blaschke_poly",
            "zeros": [[a.real, a.imag] for a in self.zeros],
            "coeffs": [[c.real, c.imag] for c in self.poly.coeffs],
        }


def function_from_dict(d: dict) -> BoundaryFunction:
    kind = d.get("kind")
    def _c(pairs):
        return [complex(re, im) for re, im in pairs]
    if kind == "poly":
        unknown = set(d) - {"kind", "coeffs"}
        if unknown:
            raise ValueError(f"unknown keys: {sorted(unknown)}")
        return Polynomial(_c(d["coeffs"]))
    if kind == "rational":
        unknown = set(d) - {"kind", "num", "den"}
        if unknown:
            raise ValueError(f"unknown keys: {sorted(unknown)}")
        return RationalFunction(_c(d["num"]), _c(d["den"]))
    if kind == "blaschke_poly":
        unknown = set(d) - {"kind", "zeros", "coeffs"}
        if unknown:
            raise ValueError(f"unknown keys: {sorted(unknown)}")
        return BlaschkePoly(_c(d["zeros"]), Polynomial(_c(d["coeffs"])))
    raise ValueError(f"unknown function kind {kind!r}")


def vanishing_on(angles: Sequence[float], poly: Polynomial | None = None) -> Polynomial:
    """Polynomial vanishing exactly at the given circle angles.

    Built as prod (z - e^{i theta_j}) times an optional polynomial, so the
    constructed function is structurally zero on the prescribed finite set.
    """
    coeffs = np.asarray([1.0 + 0.0j])
    for t in angles:
        z0 = np.exp(1j * as_angle(t))
        coeffs = np.convolve(coeffs, np.asarray([-z0, 1.0 + 0.0j]))
    if poly is not None:
        coeffs = np.convolve(coeffs, poly.coeffs)
    return Polynomial(coeffs)


# ---------------------------------------------------------------------------
# energies
# ---------------------------------------------------------------------------


def _span(arc: Arc | None, anchor: float = 0.0) -> tuple[float, float]:
    if arc is None:
        return anchor, anchor + TWO_PI
    return arc.start, arc.start + arc.length


def _dq_integral(
    f: BoundaryFunction,
    lo: float,
    hi: float,
    xi_theta: float,
    jet_xi,
    tol: float,
    extra_anchors: Sequence[float] = (),
) -> tuple[float, bool]:
    """Integral over theta in [lo, hi] of the squared difference quotient
    against xi, in raw dtheta units."""
    f_xi, fp_xi, fpp_xi = (complex(j) for j in jet_xi)

    def integrand(th):
        fz = f.boundary_values(th)
        return _kernels.dq_values(th, fz, xi_theta, f_xi, fp_xi, fpp_xi)

    pos = lo + math.fmod(xi_theta - lo, TWO_PI)
    if pos < lo:
        pos += TWO_PI
    anchors = [(pos, 1e-7), (pos - TWO_PI, 1e-7)]
    for t in extra_anchors:
        p = lo + math.fmod(t - lo, TWO_PI)
        if p < lo:
            p += TWO_PI
        anchors.append((p, 1e-7))
    edges = edges_with_anchors(lo, hi, anchors, max_span=(hi - lo) / 8.0)
    res = integrate(integrand, edges, rtol=tol)
    return res.value, res.converged


def local_dirichlet(f: BoundaryFunction, xi, tol: float = 1e-9) -> float:
    """Local Dirichlet integral at a circle point: the dm-integral of
    |f(zeta)-f(xi)|^2 / |zeta-xi|^2, with the diagonal handled analytically."""
    if tol <= 0:
        raise ValueError("tol must be positive")
    t = as_angle(xi)
    jet_xi = f.jet(np.exp(1j * t))
    val, ok = _dq_integral(f, t, t + TWO_PI, t, jet_xi, tol)
    if not ok:
        raise PrecisionLoss("local Dirichlet quadrature did not converge")
    return val / TWO_PI


def dirichlet_energy_boundary(f: BoundaryFunction, mu: Measure, tol: float = 1e-9) -> float:
    """Dirichlet energy: the local integral averaged against the measure."""
    if tol <= 0:
        raise ValueError("tol must be positive")
    total = 0.0
    for t, m in zip(mu.atom_angles, mu.atom_masses):
        total += m * local_dirichlet(f, t, tol)
    if not mu.density.is_zero():
        density = mu.density

        def outer(ths):
            return np.array(
                [local_dirichlet(f, t, tol) for t in ths]
            ) * density.eval(ths)

        edges = _density_edges(density)
        res = integrate(outer, edges, rtol=max(tol, 1e-8))
        if not res.converged:
            raise PrecisionLoss("outer energy quadrature did not converge")
        total += res.value / TWO_PI
    return total


def _abs_fp_sq_modes(f: BoundaryFunction, rs: np.ndarray, tol: float):
    """Fourier modes b_k(r) of theta -> |f'(r e^{i theta})|^2, k = 0..K-1.

    Exact (finite) for polynomials; spectral FFT with mode-decay truncation
    otherwise.  Returns an array of shape (len(rs), K).
    """
    if isinstance(f, Polynomial):
        d = f.deriv_coeffs()
        D = d.size
        ks = np.arange(D)
        out = np.zeros((rs.size, D), dtype=complex)
        for k in range(D):
            l = np.arange(0, D - k)
            prod = d[l + k] * np.conj(d[l])
            out[:, k] = np.sum(
                prod[None, :] * rs[:, None] ** (2 * l + k)[None, :], axis=1
            )
        return out
    M = 256
    while True:
        th = np.arange(M) * TWO_PI / M
        rows = []
        ok = True
        for r in rs:
            fp = f.jet(r * np.exp(1j * th))[1]
            b = np.fft.rfft(np.abs(fp) ** 2) / M
            rows.append(b)
            tail = np.max(np.abs(b[-M // 8 :]))
            if tail > 1e-13 * (abs(b[0]) + 1.0):
                ok = False
        if ok or M >= 1 << 14:
            return np.asarray(rows)
        M *= 2


def dirichlet_energy_area(f: BoundaryFunction, mu: Measure, tol: float = 1e-9) -> float:
    """Area form of the energy: integral over the disc of |f'|^2 times the
    Poisson integral of the measure, against normalized area.

    Radial panels refine geometrically toward |z| = 1; at each radius the
    angular integral is contracted spectrally against the measure's Fourier
    modes (exact in theta for polynomial integrands).  Must agree with
    dirichlet_energy_boundary within combined tolerances.
    """
    if tol <= 0:
        raise ValueError("tol must be positive")
    probe = _abs_fp_sq_modes(f, np.array([0.9]), tol)
    K = probe.shape[1]
    modes = measure_modes(mu, K - 1)

    def radial(rs):
        rs = np.asarray(rs, dtype=float)
        b = _abs_fp_sq_modes(f, rs, tol)
        h = b[:, 0].real * modes[0].real
        for k in range(1, K):
            h = h + 2.0 * (b[:, k] * np.conj(modes[k])).real * rs**k
        return 2.0 * rs * h

    edges = edges_with_anchors(0.0, 1.0, [(1.0, 1e-8)])
    res = integrate(radial, edges, rtol=tol)
    if not res.converged:
        raise PrecisionLoss("radial energy quadrature did not converge")
    return res.value


def localized_energy(
    f: BoundaryFunction,
    J: Arc | None,
    L: Arc | None,
    mu: Measure,
    tol: float = 1e-9,
) -> float:
    """Energy localized to zeta in J (dm) and xi in L (measure).

    Atoms of the measure lying in the open arc L are summed exactly; the
    density part is an outer adaptive quadrature over L with an inner
    difference-quotient quadrature over J per node.  None means the full
    circle on either slot.
    """
    if tol <= 0:
        raise ValueError("tol must be positive")
    lo, hi = _span(J)
    zero_anchors = f.circle_zero_angles()
    total = 0.0
    for t, m in zip(mu.atom_angles, mu.atom_masses):
        if L is not None and not L.contains(t):
            continue
        jet_xi = f.jet(np.exp(1j * t))
        val, ok = _dq_integral(f, lo, hi, t, jet_xi, tol, extra_anchors=zero_anchors)
        if not ok:
            raise PrecisionLoss("localized energy inner quadrature did not converge")
        total += m * val / TWO_PI
    if not mu.density.is_zero():
        density = mu.density
        xlo, xhi = _span(L)

        def outer(ths):
            out = np.empty(ths.size)
            for i, t in enumerate(ths):
                jet_xi = f.jet(np.exp(1j * t))
                val, _ = _dq_integral(f, lo, hi, t, jet_xi, tol, extra_anchors=zero_anchors)
                out[i] = val / TWO_PI
            return out * density.eval(ths)

        bps = [xlo + math.fmod(b - xlo, TWO_PI) for b in density.breakpoints()]
        edges = np.unique(
            np.concatenate(
                [
                    np.asarray([xlo, xhi]),
                    np.asarray([b + (TWO_PI if b < xlo else 0.0) for b in bps]),
                    np.linspace(xlo, xhi, 9),
                ]
            )
        )
        edges = edges[(edges >= xlo) & (edges <= xhi)]
        res = integrate(outer, edges, rtol=max(tol, 1e-7))
        if not res.converged:
            raise PrecisionLoss("localized energy outer quadrature did not converge")
        total += res.value / TWO_PI
    return total


def arc_average(f: BoundaryFunction, J: Arc, tol: float = 1e-9) -> float:
    """Mean of |f| over an arc against arc length."""
    if tol <= 0:
        raise ValueError("tol must be positive")
    lo, hi = _span(J)
    anchors = []
    for t in f.circle_zero_angles():
        p = lo + math.fmod(t - lo, TWO_PI)
        if p < lo:
            p += TWO_PI
        anchors.append((p, 1e-9))
    edges = edges_with_anchors(lo, hi, anchors, max_span=(hi - lo) / 4.0)
    res = integrate(lambda th: np.abs(f.boundary_values(th)), edges, rtol=tol)
    return res.value / J.length


def arc_l2(f: BoundaryFunction, J: Arc, tol: float = 1e-9) -> float:
    """dm-integral of |f|^2 over an arc."""
    lo, hi = _span(J)
    edges = edges_with_anchors(lo, hi, [], max_span=(hi - lo) / 4.0)
    res = integrate(lambda th: np.abs(f.boundary_values(th)) ** 2, edges, rtol=tol)
    return res.value / TWO_PI


def norm_mu(f: BoundaryFunction, mu: Measure, tol: float = 1e-9) -> float:
    """Squared norm: L2(dm) norm squared plus the Dirichlet energy."""
    return f.l2_norm_sq(tol) + dirichlet_energy_boundary(f, mu, tol)

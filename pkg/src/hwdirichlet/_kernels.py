"""Hot numeric kernels: numba @njit implementations with a pure-numpy fallback.

The numpy path is selected by setting the environment variable
``HWDIRICHLET_NO_NUMBA=1`` before import (or automatically if numba is not
importable).  Both paths accumulate in a fixed order, so each is
deterministic run-to-run; the two paths may differ in the last bits because
numpy uses pairwise summation.

Kernels:

* ``poisson_ray(x, thetas, masses, zeta)``   - Poisson integral of an atomic
  measure along the ray (1-x)*e^{i*zeta}.
* ``poisson_at(rs, phis, thetas, masses)``   - same, at arbitrary disc points.
* ``newton_values(ts, thetas, masses)``      - squared-chord potential at
  circle angles ts (no collision guard; callers exclude atom neighborhoods).
* ``dq_values(th, fz, xi_theta, f_xi, fp_xi, fpp_xi)`` - squared difference
  quotient |f(zeta)-f(xi)|^2 / |zeta-xi|^2 on the circle, switching to a
  two-term Taylor form when the chord is below 1e-6 to avoid catastrophic
  cancellation.
"""

from __future__ import annotations

import math
import os

import numpy as np

DQ_TAYLOR_CHORD = 1e-6
_CHUNK = 1 << 22  # fallback broadcasting cap, in elements


def _poisson_ray_np(x, thetas, masses, zeta):
    # stable kernel form: |zeta - z|^2 = x^2 + 4 r sin^2(d/2), 1-|z|^2 = x(2-x)
    out = np.empty(x.size)
    step = max(1, _CHUNK // max(1, thetas.size))
    for i0 in range(0, x.size, step):
        xs = x[i0 : i0 + step]
        r = 1.0 - xs
        num = xs * (2.0 - xs)
        s = np.sin(0.5 * (thetas[None, :] - zeta))
        den = (xs * xs)[:, None] + 4.0 * r[:, None] * (s * s)
        out[i0 : i0 + step] = num * np.sum(masses[None, :] / den, axis=1)
    return out


def _poisson_at_np(rs, phis, thetas, masses):
    out = np.empty(rs.size)
    step = max(1, _CHUNK // max(1, thetas.size))
    for i0 in range(0, rs.size, step):
        r = rs[i0 : i0 + step]
        p = phis[i0 : i0 + step]
        x = 1.0 - r
        num = x * (2.0 - x)
        s = np.sin(0.5 * (thetas[None, :] - p[:, None]))
        den = (x * x)[:, None] + 4.0 * r[:, None] * (s * s)
        out[i0 : i0 + step] = num * np.sum(masses[None, :] / den, axis=1)
    return out


def _newton_values_np(ts, thetas, masses):
    out = np.empty(ts.size)
    step = max(1, _CHUNK // max(1, thetas.size))
    for i0 in range(0, ts.size, step):
        t = ts[i0 : i0 + step]
        s = np.sin(0.5 * (thetas[None, :] - t[:, None]))
        out[i0 : i0 + step] = np.sum(masses[None, :] / (4.0 * s * s), axis=1)
    return out


def _dq_values_np(th, fz, xi_theta, f_xi, fp_xi, fpp_xi):
    s = np.sin(0.5 * (th - xi_theta))
    chord_sq = 4.0 * s * s
    near = chord_sq < DQ_TAYLOR_CHORD * DQ_TAYLOR_CHORD
    diff = fz - f_xi
    with np.errstate(divide="ignore", invalid="ignore"):
        vals = (diff.real * diff.real + diff.imag * diff.imag) / chord_sq
    if near.any():
        dz = np.exp(1j * th[near]) - np.exp(1j * xi_theta)
        q = fp_xi + 0.5 * dz * fpp_xi
        vals[near] = q.real * q.real + q.imag * q.imag
    return vals


try:
    if os.environ.get("HWDIRICHLET_NO_NUMBA", "").strip() not in ("", "0"):
        raise ImportError("numba disabled by HWDIRICHLET_NO_NUMBA")
    from numba import njit

    @njit(cache=True)
    def _poisson_ray_nb(x, thetas, masses, zeta):  # pragma: no cover - jitted
        out = np.empty(x.size)
        for i in range(x.size):
            xi = x[i]
            r = 1.0 - xi
            num = xi * (2.0 - xi)
            acc = 0.0
            for j in range(thetas.size):
                s = math.sin(0.5 * (thetas[j] - zeta))
                den = xi * xi + 4.0 * r * s * s
                acc += masses[j] / den
            out[i] = num * acc
        return out

    @njit(cache=True)
    def _poisson_at_nb(rs, phis, thetas, masses):  # pragma: no cover - jitted
        out = np.empty(rs.size)
        for i in range(rs.size):
            r = rs[i]
            x = 1.0 - r
            num = x * (2.0 - x)
            acc = 0.0
            for j in range(thetas.size):
                s = math.sin(0.5 * (thetas[j] - phis[i]))
                den = x * x + 4.0 * r * s * s
                acc += masses[j] / den
            out[i] = num * acc
        return out

    @njit(cache=True)
    def _newton_values_nb(ts, thetas, masses):  # pragma: no cover - jitted
        out = np.empty(ts.size)
        for i in range(ts.size):
            acc = 0.0
            for j in range(thetas.size):
                s = math.sin(0.5 * (thetas[j] - ts[i]))
                acc += masses[j] / (4.0 * s * s)
            out[i] = acc
        return out

    @njit(cache=True)
    def _dq_values_nb(th, fz, xi_theta, f_xi, fp_xi, fpp_xi):  # pragma: no cover
        out = np.empty(th.size)
        xi_c = complex(math.cos(xi_theta), math.sin(xi_theta))
        for i in range(th.size):
            s = math.sin(0.5 * (th[i] - xi_theta))
            chord_sq = 4.0 * s * s
            if chord_sq < DQ_TAYLOR_CHORD * DQ_TAYLOR_CHORD:
                dz = complex(math.cos(th[i]), math.sin(th[i])) - xi_c
                q = fp_xi + 0.5 * dz * fpp_xi
                out[i] = q.real * q.real + q.imag * q.imag
            else:
                d = fz[i] - f_xi
                out[i] = (d.real * d.real + d.imag * d.imag) / chord_sq
        return out

    BACKEND = "numba"
    poisson_ray = _poisson_ray_nb
    poisson_at = _poisson_at_nb
    newton_values = _newton_values_nb
    dq_values = _dq_values_nb
except ImportError:
    BACKEND = "numpy"
    poisson_ray = _poisson_ray_np
    poisson_at = _poisson_at_np
    newton_values = _newton_values_np
    dq_values = _dq_values_np

# numpy implementations stay importable for tests and benchmarks
poisson_ray_numpy = _poisson_ray_np
poisson_at_numpy = _poisson_at_np
newton_values_numpy = _newton_values_np
dq_values_numpy = _dq_values_np

"""Model Helmholtz problem on the unit square with a known radial solution.

-Laplace(u) - k^2 u = f in (0,1)^2 with the impedance condition
du/dn + iku = g on the boundary, where f = sin(kr)/r and

    u(x, y) = cos(kr)/k - c J0(kr),   c = (cos k + i sin k) / (k (J0(k) + i J1(k))),

r = |(x, y)|.  The constant c makes du/dr + iku vanish on the unit circle
r = 1; on the square the boundary data g is computed from u directly.  The
Bessel evaluators are self-contained with absolute error <= 1e-13 on
[0, 1e4].
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from numpy.typing import NDArray

from .element import _legendre_nodes

# integral-representation branch: J_n(x) = (1/pi) int_0^pi cos(n t - x sin t) dt,
# 40-point Gauss-Legendre in t; accurate to ~7e-15 for 8 < x <= 20
_s, _w = _legendre_nodes(40)
_THETA = 0.5 * np.pi * (_s + 1.0)
_WGTS = 0.5 * _w
_SINTH = np.sin(_THETA)

_SERIES_CUT = 8.0
_ASYM_CUT = 20.0
_SQRT_HALF = np.sqrt(0.5)


def _j0_series(x):
    q = 0.25 * x * x
    out = np.ones_like(x)
    term = np.ones_like(x)
    for m in range(1, 30):
        term = term * (-q) / (m * m)
        out += term
    return out


def _j1_series(x):
    q = 0.25 * x * x
    out = np.ones_like(x)
    term = np.ones_like(x)
    for m in range(1, 30):
        term = term * (-q) / (m * (m + 1))
        out += term
    return out * 0.5 * x


def _j_intrep(nu, x):
    ph = nu * _THETA[None, :] - x[:, None] * _SINTH[None, :]
    return np.cos(ph) @ _WGTS


def _hankel_pq(x, mu):
    # 7 terms of each asymptotic cosine/sine series; for x > 20 the first
    # omitted term is below 5e-15
    p = np.ones_like(x)
    q = np.zeros_like(x)
    term = np.ones_like(x)
    for j in range(1, 15):
        term = term * (mu - (2 * j - 1) ** 2) / (8.0 * j * x)
        if j % 2 == 1:
            q += term if (j - 1) // 2 % 2 == 0 else -term
        else:
            p += term if (j // 2) % 2 == 0 else -term
    return p, q


def _j0_asym(x):
    p, q = _hankel_pq(x, 0.0)
    c, s = np.cos(x), np.sin(x)
    # cos(x - pi/4), sin(x - pi/4) without forming the shifted argument
    return np.sqrt(2.0 / (np.pi * x)) * ((p * (c + s) + q * (c - s)) * _SQRT_HALF)


def _j1_asym(x):
    p, q = _hankel_pq(x, 4.0)
    c, s = np.cos(x), np.sin(x)
    # phase x - 3pi/4: cos -> (s - c)/sqrt2, sin -> -(c + s)/sqrt2
    return np.sqrt(2.0 / (np.pi * x)) * ((p * (s - c) + q * (c + s)) * _SQRT_HALF)


def _bessel(nu, x):
    x = np.asarray(x, dtype=float)
    scalar = x.ndim == 0
    x = np.atleast_1d(x)
    if not np.all(np.isfinite(x)) or np.any(x < 0.0):
        raise ValueError("Bessel argument must be finite and >= 0")
    out = np.empty_like(x)
    lo = x <= _SERIES_CUT
    hi = x > _ASYM_CUT
    mid = ~lo & ~hi
    if lo.any():
        out[lo] = _j0_series(x[lo]) if nu == 0 else _j1_series(x[lo])
    if mid.any():
        out[mid] = _j_intrep(nu, x[mid])
    if hi.any():
        out[hi] = _j0_asym(x[hi]) if nu == 0 else _j1_asym(x[hi])
    return float(out[0]) if scalar else out


def bessel_j0(x):
    """Bessel function J0; scalar or elementwise on arrays."""
    return _bessel(0, x)


def bessel_j1(x):
    """Bessel function J1; scalar or elementwise on arrays."""
    return _bessel(1, x)


@dataclass(frozen=True)
class WaveConfig:
    """Wave number k > 0."""

    k: float

    def __post_init__(self):
        if not (np.isfinite(self.k) and self.k > 0):
            raise ValueError(f"wave number must be positive and finite, got {self.k!r}")


# below this value of kr the radial factors switch to 3-term Taylor series
_TAYLOR_CUT = 1e-4


def _radii(points):
    pts = np.asarray(points, dtype=float)
    return pts, np.hypot(pts[..., 0], pts[..., 1])


@dataclass(frozen=True)
class ExactSolution:
    """The radial solution u = cos(kr)/k - c J0(kr) and its derivatives."""

    k: float
    c: complex = field(init=False)

    def __post_init__(self):
        k = self.k
        if not (np.isfinite(k) and k > 0):
            raise ValueError(f"wave number must be positive and finite, got {k!r}")
        denom = k * (bessel_j0(k) + 1j * bessel_j1(k))
        object.__setattr__(self, "c", complex((np.cos(k) + 1j * np.sin(k)) / denom))

    def u(self, points):
        pts, r = _radii(points)
        z = self.k * r
        return np.cos(z) / self.k - self.c * bessel_j0(z)

    def grad(self, points):
        """Gradient (du/dr)(x/r, y/r); rejects the singular point r = 0."""
        pts, r = _radii(points)
        if np.any(r == 0.0):
            raise ValueError("gradient is direction-free at the origin")
        k, c = self.k, self.c
        z = k * r
        small = z < _TAYLOR_CUT
        ratio = np.empty(r.shape, dtype=complex)   # (du/dr)/r
        if small.any():
            z2 = z[small] ** 2
            ratio[small] = (-k * (1.0 - z2 / 6.0 + z2 * z2 / 120.0)
                            + c * k * k * 0.5 * (1.0 - z2 / 8.0 + z2 * z2 / 192.0))
        big = ~small
        if big.any():
            zb, rb = z[big], r[big]
            ratio[big] = (-np.sin(zb) + c * k * bessel_j1(zb)) / rb
        return ratio[..., None] * pts

    def g(self, points, normals):
        """Impedance data du/dn + iku for outward unit normals."""
        n = np.asarray(normals, dtype=float)
        dn = np.sum(self.grad(points) * n, axis=-1)
        return dn + 1j * self.k * self.u(points)


def source_f(point, k):
    """Right-hand side sin(kr)/r, value k at r = 0."""
    WaveConfig(k)
    _, r = _radii(point)
    z = np.asarray(k * r)
    small = z < _TAYLOR_CUT
    out = np.empty(z.shape)
    if small.any():
        z2 = z[small] ** 2
        out[small] = k * (1.0 - z2 / 6.0 + z2 * z2 / 120.0)
    if (~small).any():
        out[~small] = np.sin(z[~small]) / r[~small]
    return float(out) if out.ndim == 0 else out


def exact_u(point, k):
    return ExactSolution(k).u(point)


def exact_grad_u(point, k):
    return ExactSolution(k).grad(point)


def robin_g(point, normal, k):
    return ExactSolution(k).g(point, normal)

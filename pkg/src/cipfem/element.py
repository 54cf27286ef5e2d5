"""Reference-element machinery.

1D Lagrange bases on equispaced nodes of [0,1] with derivatives of any order,
their 2D tensor products, and Gauss-Legendre quadrature mapped to [0,1].
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from numpy.polynomial import Polynomial
from numpy.typing import NDArray


class Basis1D:
    """Lagrange basis of order p on the p+1 equispaced nodes of [0,1]."""

    def __init__(self, p: int):
        self.p = p
        self.nodes = np.linspace(0.0, 1.0, p + 1)
        polys = []
        for a in range(p + 1):
            q = Polynomial([1.0])
            for b in range(p + 1):
                if b != a:
                    q *= Polynomial([-self.nodes[b], 1.0]) / (self.nodes[a] - self.nodes[b])
            polys.append(q)
        # _derivs[d][a] = d-th derivative of basis function a
        self._derivs = [polys]
        for _ in range(p):
            self._derivs.append([q.deriv() for q in self._derivs[-1]])

    def eval(self, d: int, x) -> NDArray[np.float64]:
        """Values of all p+1 basis functions' d-th derivative at x.

        x may be a scalar or an array; the basis index is the last axis of
        the result.  Derivatives of order > p are identically zero.
        """
        x = np.asarray(x, dtype=float)
        if d > self.p:
            return np.zeros(x.shape + (self.p + 1,))
        return np.stack([q(x) for q in self._derivs[d]], axis=-1)


def lagrange_basis(p: int) -> Basis1D:
    if p < 1:
        raise ValueError(f"order must be >= 1, got {p}")
    return Basis1D(p)


@dataclass(frozen=True)
class QuadRule:
    """Quadrature on [0,1]; positive weights summing to 1."""

    n: int
    points: NDArray[np.float64]
    weights: NDArray[np.float64]


def _legendre_nodes(n: int) -> tuple[NDArray[np.float64], NDArray[np.float64]]:
    """Gauss-Legendre nodes and weights on [-1,1] by Newton iteration."""
    k = np.arange(n)
    # Chebyshev-like initial guesses converge for all n used here
    x = np.cos(np.pi * (k + 0.75) / (n + 0.5))
    for _ in range(100):
        # Legendre recurrence: (j+1) P_{j+1} = (2j+1) x P_j - j P_{j-1}
        p0 = np.ones_like(x)
        p1 = x.copy()
        for j in range(1, n):
            p0, p1 = p1, ((2 * j + 1) * x * p1 - j * p0) / (j + 1)
        dp = n * (x * p1 - p0) / (x * x - 1.0)
        dx = p1 / dp
        x -= dx
        if np.max(np.abs(dx)) < 1e-15:
            break
    p0 = np.ones_like(x)
    p1 = x.copy()
    for j in range(1, n):
        p0, p1 = p1, ((2 * j + 1) * x * p1 - j * p0) / (j + 1)
    dp = n * (x * p1 - p0) / (x * x - 1.0)
    w = 2.0 / ((1.0 - x * x) * dp * dp)
    order = np.argsort(x)
    return x[order], w[order]


def gauss_rule(n: int) -> QuadRule:
    """n-point Gauss-Legendre rule mapped to [0,1]."""
    if not 1 <= n <= 32:
        raise ValueError(f"point count must be in [1, 32], got {n}")
    if n == 1:
        return QuadRule(1, np.array([0.5]), np.array([1.0]))
    x, w = _legendre_nodes(n)
    return QuadRule(n, 0.5 * (x + 1.0), 0.5 * w)


def shape_2d(p: int, dx: int, dy: int, point) -> NDArray[np.float64]:
    """Tensor-product basis derivatives at a reference point.

    Returns the (p+1)^2 values b_a^(dx)(x) * b_b^(dy)(y) ordered x fastest
    (index b*(p+1)+a), matching the DOF map's local node ordering.  On a
    physical element of size h a derivative of total order d scales by h^-d.
    """
    basis = lagrange_basis(p)
    x, y = point
    bx = basis.eval(dx, x)
    by = basis.eval(dy, y)
    return np.outer(by, bx).ravel()

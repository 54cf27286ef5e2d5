"""Discrete dispersion relation of 1D FEM / CIP-FEM on uniform grids.

A Bloch-periodic ansatz u_(cell n) = e^(i n theta) u_hat reduces the
infinite uniform grid to one period with p unknowns (the period's vertex and
its p-1 interior nodes).  The scheme propagates a wave of nondimensional
wavenumber theta = omega*h at given t = kh exactly when the p x p symbol
T(theta) is singular.  For real penalty weights T is Hermitian, so det T is
real and root-bracketing on theta in (0, pi) applies; for p = 1 the symbol
is scalar and quadratic in cos(theta), solved in closed form.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .element import gauss_rule, lagrange_basis
from .penalty import PenaltySet, gamma_zero

_N_BRACKETS = 400


class DispersionRootError(Exception):
    """No propagating root was found in (0, pi)."""


@dataclass(frozen=True)
class DispersionResult:
    p: int
    t: float
    gamma: PenaltySet
    theta_discrete: float
    rel_phase_error: float
    residual: float        # |det T| at the root
    symbol_scale: float    # Hadamard-style bound normalizing the residual


@lru_cache(maxsize=None)
def _period_pieces(p: int):
    """Reference blocks: 1D stiffness/mass and jump end-derivative rows."""
    rule = gauss_rule(p + 1)
    basis = lagrange_basis(p)
    V = basis.eval(0, rule.points)
    D = basis.eval(1, rule.points)
    w = rule.weights[:, None]
    K1 = D.T @ (w * D)
    M1 = V.T @ (w * V)
    ends = [(basis.eval(j, 0.0), basis.eval(j, 1.0)) for j in range(1, p + 1)]
    return K1, M1, ends


def _gamma_values(p: int, gamma: PenaltySet | None):
    if gamma is None:
        gamma = gamma_zero(p)
    if gamma.p != p:
        raise ValueError(f"penalty set order {gamma.p} does not match p={p}")
    return gamma, np.asarray(gamma.values)


def bloch_symbol(p: int, t: float, gamma: PenaltySet | None, theta: float) -> np.ndarray:
    """The p x p one-period symbol T(theta) at t = kh.

    Unknowns are ordered (vertex, interior_1, ..., interior_(p-1)); the
    element matrix K - t^2 M is folded with phase e^(i theta) on the right
    vertex, and each jump order j adds gamma_j r r* for its jump row r at
    the period's vertex (the 1/h scalings cancel as in 2D assembly).
    """
    _, gvals = _gamma_values(p, gamma)
    K1, M1, ends = _period_pieces(p)
    ph = np.exp(1j * theta)
    R = np.zeros((p + 1, p), dtype=np.complex128)
    R[0, 0] = 1.0
    for a in range(1, p):
        R[a, a] = 1.0
    R[p, 0] = ph
    T = R.conj().T @ (K1 - t * t * M1) @ R
    for j, (d0, d1) in enumerate(ends):
        row = np.zeros(p, dtype=np.complex128)
        # left element enters with phase e^(-i theta) on its own period DOFs
        row[0] = d1[0] * np.conj(ph) + d1[p] - (d0[0] + d0[p] * ph)
        for a in range(1, p):
            row[a] = d1[a] * np.conj(ph) - d0[a]
        T += gvals[j] * np.outer(row.conj(), row)
    return T


def _symbol_scale(p: int, t: float, gvals) -> float:
    """Hadamard-style magnitude bound used to normalize det residuals."""
    K1, M1, ends = _period_pieces(p)
    R = np.zeros((p + 1, p))
    R[0, 0] = 1.0
    for a in range(1, p):
        R[a, a] = 1.0
    R[p, 0] = 1.0
    T = R.T @ (np.abs(K1) + t * t * np.abs(M1)) @ R
    for j, (d0, d1) in enumerate(ends):
        row = np.zeros(p)
        row[0] = abs(d1[0]) + abs(d1[p]) + abs(d0[0]) + abs(d0[p])
        for a in range(1, p):
            row[a] = abs(d1[a]) + abs(d0[a])
        T += abs(gvals[j]) * np.outer(row, row)
    return float(np.prod(np.linalg.norm(T, axis=1)))


def _det(p: int, t: float, gamma, theta: float) -> float:
    return float(np.linalg.det(bloch_symbol(p, t, gamma, theta)).real)


def _theta_p1(t: float, g1: float) -> float:
    """Closed-form root for p = 1: the scalar symbol is quadratic in cos."""
    # T = 2(1-c) - t^2 (2+c)/3 + 4 g1 (1-c)^2 with c = cos theta
    A = 4.0 * g1
    B = -2.0 - t * t / 3.0 - 8.0 * g1
    C = 2.0 - 2.0 * t * t / 3.0 + 4.0 * g1
    if A == 0.0:
        roots = [-C / B]
    else:
        disc = B * B - 4.0 * A * C
        if disc < 0.0:
            raise DispersionRootError(f"no real cos(theta) at t={t}, gamma1={g1}")
        sq = np.sqrt(disc)
        q = -0.5 * (B + np.copysign(sq, B))
        roots = [q / A, C / q]
    cands = [np.arccos(c) for c in roots if -1.0 <= c <= 1.0]
    if not cands:
        raise DispersionRootError(f"no propagating root in (0, pi) at t={t}")
    return min(cands, key=lambda th: abs(th - t))


def discrete_wavenumber(p: int, t: float, gamma: PenaltySet | None = None) -> DispersionResult:
    """Root of det T(theta) = 0 in (0, pi) nearest t."""
    if p not in (1, 2, 3):
        raise ValueError(f"supported element orders are 1, 2, 3; got {p}")
    if not 0.0 < t < np.pi:
        raise ValueError(f"t = kh must lie in (0, pi), got {t!r}")
    gamma, gvals = _gamma_values(p, gamma)

    if p == 1:
        theta = _theta_p1(t, float(gvals[0].real))
    else:
        grid = np.linspace(1e-9, np.pi - 1e-9, _N_BRACKETS + 1)
        vals = [_det(p, t, gamma, th) for th in grid]
        roots = []
        for i in range(_N_BRACKETS):
            a, b = grid[i], grid[i + 1]
            fa, fb = vals[i], vals[i + 1]
            if fa == 0.0:
                roots.append(a)
                continue
            if fa * fb >= 0.0:
                continue
            while b - a > 1e-16 * b:
                mid = 0.5 * (a + b)
                fm = _det(p, t, gamma, mid)
                if fa * fm <= 0.0:
                    b, fb = mid, fm
                else:
                    a, fa = mid, fm
            roots.append(0.5 * (a + b))
        if not roots:
            raise DispersionRootError(
                f"no sign change of det T on (0, pi) at p={p}, t={t}; "
                "evanescent regime or inconsistent penalty weights")
        theta = min(roots, key=lambda th: abs(th - t))

    residual = abs(complex(np.linalg.det(bloch_symbol(p, t, gamma, theta))))
    return DispersionResult(p, t, gamma, float(theta), abs(theta - t) / t,
                            residual, _symbol_scale(p, t, gvals))


def phase_error_order(p: int, t_values, gamma=None):
    """Least-squares slope of log relative phase error vs log t.

    gamma may be a PenaltySet, None (plain FEM), or a callable t -> PenaltySet.
    """
    ts = [float(t) for t in t_values]
    if len(ts) < 5:
        raise ValueError(f"need at least 5 samples, got {len(ts)}")
    samples = []
    for t in ts:
        gset = gamma(t) if callable(gamma) else gamma
        res = discrete_wavenumber(p, t, gset)
        samples.append((t, max(res.rel_phase_error, 1e-300)))
    from .harness import fit_slope
    return fit_slope(samples, log_log=True)

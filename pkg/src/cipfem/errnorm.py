"""Error functionals for discrete Helmholtz solutions.

Reports the H1-seminorm and L2 errors against the exact solution, the
penalty-weighted jump seminorm, and the two composite energy quantities

    e_gamma^2     = |error|_{H1}^2 + ||error||_{L2}^2 + jump^2
    e_gamma_big^2 = e_gamma^2 + k^2 ||error||_{L2}^2

together with relative errors normalized by the exact solution's seminorm
and norm computed with the same quadrature.  The nodal Lagrange interpolant
of the exact solution provides the best-approximation baseline.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .assemble import DiscreteField, _edge_jump_rows, _rule_1d
from .element import QuadRule, lagrange_basis
from .grid import DofMap, Mesh
from .manufactured import ExactSolution
from .penalty import PenaltySet

# elements are processed in chunks to bound the quadrature-point workspace
_CHUNK_POINTS = 4_000_000


@dataclass(frozen=True)
class ErrorReport:
    h1_semi_abs: float
    h1_semi_rel: float
    l2_abs: float
    l2_rel: float
    jump_semi: float
    e_gamma: float
    e_gamma_big: float
    exact_h1_semi: float
    exact_l2: float
    dofs: int
    k: float
    p: int
    m: int
    gamma_provenance: str


def _field_errors(mesh: Mesh, dof_map: DofMap, uh: DiscreteField,
                  exact: ExactSolution, rule: QuadRule):
    """Squared H1-seminorm/L2 errors and exact normalizers by quadrature."""
    p, h, m = dof_map.p, mesh.h, mesh.m
    basis = lagrange_basis(p)
    xq, wq = rule.points, rule.weights
    V = basis.eval(0, xq)
    D = basis.eval(1, xq)
    nq = rule.n
    Phi = (V[:, None, :, None] * V[None, :, None, :]).reshape(nq * nq, -1)
    PhiX = (V[:, None, :, None] * D[None, :, None, :]).reshape(nq * nq, -1)
    PhiY = (D[:, None, :, None] * V[None, :, None, :]).reshape(nq * nq, -1)
    W2 = (h * h) * np.outer(wq, wq).ravel()
    offs = np.stack(np.broadcast_arrays(xq[None, :], xq[:, None]),
                    axis=-1).reshape(-1, 2) * h

    dofs = dof_map.element_dofs
    origins = mesh.elements * h
    coeffs = uh.coefficients

    h1_sq = l2_sq = ex_h1_sq = ex_l2_sq = 0.0
    chunk = max(1, _CHUNK_POINTS // (nq * nq))
    for s in range(0, m * m, chunk):
        sl = slice(s, min(s + chunk, m * m))
        U = coeffs[dofs[sl]]                              # (ce, nl)
        pts = origins[sl, None, :] + offs[None, :, :]     # (ce, nq^2, 2)
        uv = U @ Phi.T
        ux = (U @ PhiX.T) / h
        uy = (U @ PhiY.T) / h
        eu = exact.u(pts)
        eg = exact.grad(pts)
        l2_sq += float(np.sum(W2 * np.abs(eu - uv) ** 2))
        h1_sq += float(np.sum(W2 * (np.abs(eg[..., 0] - ux) ** 2
                                    + np.abs(eg[..., 1] - uy) ** 2)))
        ex_l2_sq += float(np.sum(W2 * np.abs(eu) ** 2))
        ex_h1_sq += float(np.sum(W2 * (np.abs(eg[..., 0]) ** 2
                                       + np.abs(eg[..., 1]) ** 2)))
    return h1_sq, l2_sq, ex_h1_sq, ex_l2_sq


def _jump_seminorm_sq(mesh: Mesh, dof_map: DofMap, uh: DiscreteField,
                      gamma: PenaltySet | None, rule: QuadRule) -> float:
    """sum_j |gamma_j| h^(2j-1) integral of the squared order-j jumps.

    The exact solution is smooth, so the jump of (u - u_h) equals the jump
    of u_h; all powers of h cancel exactly as in the penalty assembly.
    """
    if gamma is None or gamma.is_zero:
        return 0.0
    p = dof_map.p
    override = gamma.per_edge_override or {}
    by_axis = {"x": {}, "y": {}}
    for edge, vals in override.items():
        by_axis[edge.axis][(edge.left_elem, edge.right_elem)] = vals

    ed = dof_map.element_dofs
    coeffs = uh.coefficients
    wq = rule.weights
    total = 0.0
    for axis, pairs in (("x", mesh.x_edge_elements()), ("y", mesh.y_edge_elements())):
        if len(pairs) == 0:
            continue
        rows = _edge_jump_rows(p, rule, axis)
        U2 = np.hstack((coeffs[ed[pairs[:, 0]]], coeffs[ed[pairs[:, 1]]]))
        keyed = by_axis[axis]
        gvals = np.tile([abs(v) for v in gamma.values], (len(pairs), 1))
        if keyed:
            for idx, (l, r) in enumerate(map(tuple, pairs)):
                if (l, r) in keyed:
                    gvals[idx] = [abs(v) for v in keyed[(l, r)]]
        for j, R in enumerate(rows):
            jumps = U2 @ R.T                               # (ne, nq)
            total += float(np.sum(gvals[:, j] * (np.abs(jumps) ** 2 @ wq)))
    return total


def error_report(mesh: Mesh, dof_map: DofMap, uh: DiscreteField,
                 exact: ExactSolution, gamma: PenaltySet | None = None,
                 quad: QuadRule | None = None) -> ErrorReport:
    """Errors of ``uh`` against the exact solution."""
    rule = _rule_1d(dof_map.p, quad, dof_map.p + 2)
    h1_sq, l2_sq, ex_h1_sq, ex_l2_sq = _field_errors(mesh, dof_map, uh, exact, rule)
    jump_sq = _jump_seminorm_sq(mesh, dof_map, uh, gamma, rule)
    k = exact.k
    e_gamma_sq = h1_sq + l2_sq + jump_sq
    return ErrorReport(
        h1_semi_abs=np.sqrt(h1_sq),
        h1_semi_rel=np.sqrt(h1_sq / ex_h1_sq),
        l2_abs=np.sqrt(l2_sq),
        l2_rel=np.sqrt(l2_sq / ex_l2_sq),
        jump_semi=np.sqrt(jump_sq),
        e_gamma=np.sqrt(e_gamma_sq),
        e_gamma_big=np.sqrt(e_gamma_sq + k * k * l2_sq),
        exact_h1_semi=np.sqrt(ex_h1_sq),
        exact_l2=np.sqrt(ex_l2_sq),
        dofs=dof_map.total,
        k=k,
        p=dof_map.p,
        m=mesh.m,
        gamma_provenance=gamma.provenance if gamma is not None else "zero",
    )


def interpolate(dof_map: DofMap, exact: ExactSolution) -> DiscreteField:
    """Nodal Lagrange interpolant of the exact solution."""
    return DiscreteField(dof_map, exact.u(dof_map.node_coordinates()))


def interpolation_error(mesh: Mesh, dof_map: DofMap, exact: ExactSolution,
                        quad: QuadRule | None = None,
                        gamma: PenaltySet | None = None) -> ErrorReport:
    """Error report for the nodal Lagrange interpolant."""
    return error_report(mesh, dof_map, interpolate(dof_map, exact), exact,
                        gamma=gamma, quad=quad)

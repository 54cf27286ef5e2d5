"""Sparse assembly of the Helmholtz FEM / CIP-FEM system on Cartesian grids.

All elements are congruent squares, so every element shares one local
stiffness/mass block and every interior edge of a given direction shares one
local jump-penalty block; assembly reduces to scattering tiled copies of
these blocks into COO triplets and compressing to CSR.

Sesquilinear convention: the second (test) argument is conjugated.  Basis
functions are real, so the real blocks S, M, B, J are plain symmetric
matrices and the full system is S + J - k^2 M + ikB, which equals its
unconjugated transpose (complex symmetric).
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
import scipy.io
import scipy.sparse
from numpy.typing import NDArray

from .element import QuadRule, gauss_rule, lagrange_basis
from .grid import DofMap, Mesh
from .penalty import PenaltySet


@dataclass
class DiscreteField:
    """Coefficient vector over a DOF map's global Lagrange nodes."""

    dof_map: DofMap | None
    coefficients: NDArray

    def __post_init__(self):
        self.coefficients = np.asarray(self.coefficients)
        if self.dof_map is not None and self.coefficients.shape != (self.dof_map.total,):
            raise ValueError(
                f"coefficient length {self.coefficients.shape} does not match "
                f"DOF count {self.dof_map.total}")


def _check_pair(mesh: Mesh, dof_map: DofMap) -> None:
    if dof_map.mesh.m != mesh.m:
        raise ValueError(f"mesh (m={mesh.m}) and DOF map (m={dof_map.mesh.m}) disagree")


def _rule_1d(p: int, quad: QuadRule | None, n_min: int) -> QuadRule:
    if quad is None:
        return gauss_rule(n_min)
    if quad.n < n_min:
        raise ValueError(f"quadrature needs at least {n_min} points, got {quad.n}")
    return quad


def _local_1d(p: int, rule: QuadRule):
    """Reference 1D stiffness and mass blocks integrated with ``rule``."""
    basis = lagrange_basis(p)
    V = basis.eval(0, rule.points)
    D = basis.eval(1, rule.points)
    w = rule.weights[:, None]
    return D.T @ (w * D), V.T @ (w * V)


def _scatter(dofs: NDArray, values: NDArray, n: int) -> scipy.sparse.csr_matrix:
    """Sum identical-pattern local blocks into global CSR.

    dofs: (ne, nl) global indices; values: (nl, nl) shared block or
    (ne, nl, nl) per-entity blocks.
    """
    ne, nl = dofs.shape
    rows = np.repeat(dofs, nl, axis=1).ravel()
    cols = np.tile(dofs, (1, nl)).ravel()
    if values.ndim == 2:
        vals = np.tile(values.ravel(), ne)
    else:
        vals = values.reshape(ne, -1).ravel()
    out = scipy.sparse.coo_matrix((vals, (rows, cols)),
                                  shape=(n, n)).tocsr()
    out.eliminate_zeros()
    return out


def _boundary_side_dofs(dof_map: DofMap):
    """Per-side (element, local-node) global indices and outward normals.

    Each side of the square is a 1D mesh of m order-p boundary edges; yields
    (dofs1d of shape (m, p+1), outward normal, side origin/direction info
    needed to place quadrature points).
    """
    m, p, nps = dof_map.mesh.m, dof_map.p, dof_map.nodes_per_side
    e = np.arange(m)
    a = np.arange(p + 1)
    line = e[:, None] * p + a[None, :]          # 1D local-to-global on a side
    sides = [
        (line, (0.0, -1.0), "y", 0.0),                       # bottom, y = 0
        (line + (nps - 1) * nps, (0.0, 1.0), "y", 1.0),      # top, y = 1
        (line * nps, (-1.0, 0.0), "x", 0.0),                 # left, x = 0
        (line * nps + (nps - 1), (1.0, 0.0), "x", 1.0),      # right, x = 1
    ]
    return sides


@dataclass
class SystemBlocks:
    """Real symmetric blocks of the discrete Helmholtz operator.

    S: stiffness (grad, grad); M: mass; B: boundary mass on the impedance
    boundary; J: jump penalty for the gamma the blocks were assembled with
    (None when gamma is zero or absent).
    """

    mesh: Mesh = field(repr=False)
    dof_map: DofMap = field(repr=False)
    S: scipy.sparse.csr_matrix
    M: scipy.sparse.csr_matrix
    B: scipy.sparse.csr_matrix
    J: scipy.sparse.csr_matrix | None = None
    gamma: PenaltySet | None = None

    def combined(self, k: float) -> scipy.sparse.csr_matrix:
        A = self.S - (k * k) * self.M
        if self.J is not None:
            A = A + self.J
        return A.astype(np.complex128) + (1j * k) * self.B


def assemble_blocks(mesh: Mesh, dof_map: DofMap, quad: QuadRule | None = None,
                    gamma: PenaltySet | None = None) -> SystemBlocks:
    """Assemble S, M, B (and J when gamma is given and nonzero)."""
    _check_pair(mesh, dof_map)
    p = dof_map.p
    rule = _rule_1d(p, quad, p + 1)
    K1, M1 = _local_1d(p, rule)
    h = mesh.h

    S_loc = np.kron(M1, K1) + np.kron(K1, M1)       # scales as h^0
    M_loc = (h * h) * np.kron(M1, M1)
    dofs = dof_map.element_dofs
    n = dof_map.total
    S = _scatter(dofs, S_loc, n)
    M = _scatter(dofs, M_loc, n)

    B_loc = h * M1
    B = None
    for side_dofs, _, _, _ in _boundary_side_dofs(dof_map):
        part = _scatter(side_dofs, B_loc, n)
        B = part if B is None else B + part

    J = None
    if gamma is not None and not gamma.is_zero:
        if gamma.p != p:
            raise ValueError(f"penalty set has p={gamma.p}, DOF map has p={p}")
        J = assemble_penalty(mesh, dof_map, gamma, quad)
    return SystemBlocks(mesh, dof_map, S, M, B, J, gamma)


def _edge_jump_rows(p: int, rule: QuadRule, axis: str, normal_sign: int = 1):
    """Reference jump functionals of one interior edge, per jump order.

    The jump of the order-j normal derivative is (trace from the element on
    the positive side of the normal) minus (trace from the negative side);
    at each edge quadrature point this is a row [-D_j(1) x V | +D_j(0) x V]
    over the 2(p+1)^2 stacked local DOFs of the two incident elements.
    Returns [R_1, ..., R_p] with R_j of shape (nq, 2(p+1)^2).
    """
    basis = lagrange_basis(p)
    V = basis.eval(0, rule.points)                   # (nq, p+1) tangential
    nq, nl = rule.n, (p + 1) ** 2
    rows = []
    for j in range(1, p + 1):
        d0 = basis.eval(j, 0.0)                      # (p+1,) derivative rows
        d1 = basis.eval(j, 1.0)
        R = np.empty((nq, 2 * nl))
        for q in range(nq):
            if axis == "x":      # edge normal +x, tangent y
                left = np.outer(V[q], d1).ravel()
                right = np.outer(V[q], d0).ravel()
            else:                # edge normal +y, tangent x
                left = np.outer(d1, V[q]).ravel()
                right = np.outer(d0, V[q]).ravel()
            R[q, :nl] = -normal_sign * left
            R[q, nl:] = normal_sign * right
        rows.append(R)
    return rows


def _edge_gram_blocks(p: int, rule: QuadRule, axis: str, normal_sign: int):
    """Gram blocks R_j^T W R_j of the reference jump functionals.

    All powers of h cancel in the penalty term:
    gamma_j h^(2j-1) * h * h^(-2j) = gamma_j.
    """
    w = rule.weights[:, None]
    return [R.T @ (w * R) for R in _edge_jump_rows(p, rule, axis, normal_sign)]


def assemble_penalty(mesh: Mesh, dof_map: DofMap, gamma: PenaltySet,
                     quad: QuadRule | None = None,
                     normal_sign: int = 1) -> scipy.sparse.csr_matrix:
    """Jump-penalty matrix sum_j gamma_j h^(2j-1) <[d^j u/dn^j], [d^j v/dn^j]>.

    ``normal_sign = -1`` flips every edge normal; the result is invariant
    because both jump factors flip sign together.
    """
    _check_pair(mesh, dof_map)
    p = dof_map.p
    if gamma.p > p:
        raise ValueError(f"penalty orders up to {gamma.p} exceed element order {p}")
    rule = _rule_1d(p, quad, p + 1)
    n = dof_map.total
    dtype = np.float64 if gamma.is_real else np.complex128
    J = scipy.sparse.csr_matrix((n, n), dtype=dtype)
    if gamma.is_zero:
        return J

    override = gamma.per_edge_override or {}
    by_axis = {"x": {}, "y": {}}
    for edge, vals in override.items():
        by_axis[edge.axis][(edge.left_elem, edge.right_elem)] = vals

    ed = dof_map.element_dofs
    for axis, pairs in (("x", mesh.x_edge_elements()), ("y", mesh.y_edge_elements())):
        if len(pairs) == 0:
            continue
        grams = _edge_gram_blocks(p, rule, axis, normal_sign)
        dofs2 = np.hstack((ed[pairs[:, 0]], ed[pairs[:, 1]]))
        keyed = by_axis[axis]
        if not keyed:
            block = sum(g * gram for g, gram in zip(np.asarray(gamma.values, dtype=dtype), grams))
            J = J + _scatter(dofs2, block, n)
        else:
            weights = np.tile(np.asarray(gamma.values, dtype=dtype), (len(pairs), 1))
            for idx, (l, r) in enumerate(map(tuple, pairs)):
                if (l, r) in keyed:
                    weights[idx] = np.asarray(keyed[(l, r)], dtype=dtype)
            stacked = np.stack(grams)                       # (p, 2nl, 2nl)
            values = np.einsum("ej,jab->eab", weights, stacked)
            J = J + _scatter(dofs2, values, n)
    J.eliminate_zeros()
    return J


def assemble_rhs(mesh: Mesh, dof_map: DofMap, k: float,
                 quad: QuadRule | None = None, f=None, g=None) -> NDArray[np.complex128]:
    """Load vector (f, v) + <g, v> against the (real) test basis.

    f maps (points, k) to source values; g maps (points, normals, k) to
    boundary data.  Either may be None to drop that contribution.
    """
    _check_pair(mesh, dof_map)
    p = dof_map.p
    rule = _rule_1d(p, quad, p + 2)
    basis = lagrange_basis(p)
    h = mesh.h
    n = dof_map.total
    rhs = np.zeros(n, dtype=np.complex128)

    if f is not None:
        xq, wq = rule.points, rule.weights
        V = basis.eval(0, xq)                            # (nq, p+1)
        # tensor quadrature on the reference square, x fastest
        W2 = np.outer(wq, wq).ravel()
        Phi = (V[:, None, :, None] * V[None, :, None, :]).reshape(rule.n ** 2, -1)
        offs = np.stack(np.broadcast_arrays(xq[None, :], xq[:, None]),
                        axis=-1).reshape(-1, 2) * h
        origins = mesh.elements * h
        pts = origins[:, None, :] + offs[None, :, :]     # (ne, nq^2, 2)
        fv = np.asarray(f(pts, k))
        loc = (h * h) * ((fv * W2[None, :]) @ Phi)       # (ne, nl)
        dofs = dof_map.element_dofs
        rhs += (np.bincount(dofs.ravel(), weights=loc.real.ravel(), minlength=n)
                + 1j * np.bincount(dofs.ravel(), weights=loc.imag.ravel(), minlength=n))

    if g is not None:
        xq, wq = rule.points, rule.weights
        V1 = basis.eval(0, xq)                           # (nq, p+1)
        e = np.arange(mesh.m)
        along = (e[:, None] + xq[None, :]) * h           # (m, nq) running coord
        for side_dofs, normal, fixed_axis, fixed_val in _boundary_side_dofs(dof_map):
            pts = np.empty(along.shape + (2,))
            if fixed_axis == "y":
                pts[..., 0] = along
                pts[..., 1] = fixed_val
            else:
                pts[..., 0] = fixed_val
                pts[..., 1] = along
            gv = np.asarray(g(pts, np.asarray(normal), k), dtype=np.complex128)
            loc = h * ((gv * wq[None, :]) @ V1)          # (m, p+1)
            rhs += (np.bincount(side_dofs.ravel(), weights=loc.real.ravel(), minlength=n)
                    + 1j * np.bincount(side_dofs.ravel(), weights=loc.imag.ravel(), minlength=n))
    return rhs


def combined_system(blocks: SystemBlocks, k: float,
                    gamma: PenaltySet | None = None) -> scipy.sparse.csr_matrix:
    """S + J - k^2 M + ikB for the gamma the blocks carry.

    A gamma argument, when given, must match the one used at assembly; this
    guards against combining a penalty block with foreign weights.
    """
    if gamma is not None and not gamma.is_zero:
        if blocks.J is None or blocks.gamma != gamma:
            raise ValueError("blocks were not assembled with the requested penalty set")
    return blocks.combined(k)


def export_matrix(path, A) -> None:
    """Write a matrix in MatrixMarket coordinate format."""
    scipy.io.mmwrite(path, scipy.sparse.coo_matrix(A), symmetry="general")

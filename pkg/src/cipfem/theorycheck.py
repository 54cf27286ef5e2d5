"""Numerical verification of the discrete elliptic operator machinery.

The operator A_h realizes -Laplace + I on the FE space through
(A_h v, w) = (grad v, grad w) + (v, w); its generalized eigenpairs
(S + M) x = lambda M x define discrete Sobolev norms of any (also negative)
order via spectral powers.  A bisection on the uniform penalty weight
locates the experimental coercivity threshold gamma_0 < 0 below which
S + gamma J stops being positive semidefinite.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
import scipy.linalg

from .assemble import DiscreteField, assemble_blocks, assemble_penalty
from .grid import DofMap, Mesh
from .penalty import gamma_constant

_DENSE_DOF_CAP = 2500


@dataclass
class SpectralDecomposition:
    """Eigenpairs of (S + M) x = lambda M x with M-orthonormal vectors."""

    mesh: Mesh = field(repr=False)
    dof_map: DofMap = field(repr=False)
    eigenvalues: np.ndarray
    eigenvectors: np.ndarray      # columns, M-orthonormal
    M: object = field(repr=False)
    S: object = field(repr=False)


def spectral_decomposition(mesh: Mesh, dof_map: DofMap) -> SpectralDecomposition:
    if dof_map.total > _DENSE_DOF_CAP:
        raise ValueError(
            f"{dof_map.total} DOFs exceed the dense eigensolve cap {_DENSE_DOF_CAP}")
    blocks = assemble_blocks(mesh, dof_map)
    S, M = blocks.S, blocks.M
    w, v = scipy.linalg.eigh((S + M).toarray(), M.toarray())
    return SpectralDecomposition(mesh, dof_map, w, v, M, S)


def _coefficients(spec: SpectralDecomposition, v) -> np.ndarray:
    x = v.coefficients if isinstance(v, DiscreteField) else np.asarray(v)
    return spec.eigenvectors.T @ (spec.M @ x)


def discrete_norm(v, j: int, spec: SpectralDecomposition) -> float:
    """Spectral discrete Sobolev norm (sum lambda^j |a|^2)^(1/2)."""
    a = _coefficients(spec, v)
    return float(np.sqrt(np.sum(spec.eigenvalues ** j * np.abs(a) ** 2)))


def apply_power(spec: SpectralDecomposition, v, s: float) -> np.ndarray:
    """Coefficients of A_h^s v in the nodal basis."""
    a = _coefficients(spec, v)
    return spec.eigenvectors @ (spec.eigenvalues ** s * a)


@dataclass(frozen=True)
class CoercivityResult:
    gamma0_experimental: float
    bracket_width: float
    p: int
    m: int


def _second_smallest(S, J, M, gamma: float) -> float:
    A = (S + gamma * J).toarray()
    w = scipy.linalg.eigh(A, M.toarray(), eigvals_only=True,
                          subset_by_index=(0, 1))
    return float(w[1])


def coercivity_threshold(mesh: Mesh, dof_map: DofMap) -> CoercivityResult:
    """Bisect the uniform gamma where S + gamma J loses semidefiniteness.

    Constants are always in the kernel of both S and J, so definiteness is
    judged by the second-smallest eigenvalue of the (S + gamma J, M) pencil.
    """
    if dof_map.total > _DENSE_DOF_CAP:
        raise ValueError(
            f"{dof_map.total} DOFs exceed the dense eigensolve cap {_DENSE_DOF_CAP}")
    p = dof_map.p
    blocks = assemble_blocks(mesh, dof_map)
    J = assemble_penalty(mesh, dof_map, gamma_constant(p, (1.0,) * p))
    S, M = blocks.S, blocks.M

    lo, hi = -10.0, 0.0
    f_lo = _second_smallest(S, J, M, lo)
    if f_lo >= 0.0:
        raise RuntimeError("penalty never breaks coercivity down to gamma = -10")
    while hi - lo > 1e-4:
        mid = 0.5 * (lo + hi)
        if _second_smallest(S, J, M, mid) >= 0.0:
            hi = mid
        else:
            lo = mid
    return CoercivityResult(lo, hi - lo, p, mesh.m)


def run_theory_checks(ms=(4, 8), ps=(1, 2, 3), seed: int = 7) -> dict:
    """All operator/norm/coercivity checks as a JSON-friendly report."""
    from .grid import build_cartesian, build_dof_map

    rng = np.random.default_rng(seed)
    checks = []

    def record(name, p, m, measured, passed, **extra):
        checks.append({"name": name, "p": p, "m": m,
                       "measured": measured, "passed": bool(passed), **extra})

    for p in ps:
        lam_h2 = {}
        gamma0 = {}
        for m in ms:
            mesh = build_cartesian(m)
            dm = build_dof_map(mesh, p)
            spec = spectral_decomposition(mesh, dm)
            lam, vecs, M, S = spec.eigenvalues, spec.eigenvectors, spec.M, spec.S

            record("lambda_min_is_one", p, m, float(lam[0]),
                   abs(lam[0] - 1.0) <= 1e-10)
            gram = vecs.T @ (M @ vecs)
            gram_err = float(np.max(np.abs(gram - np.eye(len(lam)))))
            record("eigenvector_mass_orthonormality", p, m, gram_err,
                   gram_err <= 1e-10)

            v = rng.standard_normal(dm.total) + 1j * rng.standard_normal(dm.total)
            w0 = discrete_norm(v, 0, spec)
            ref0 = float(np.sqrt(np.real(np.vdot(v, M @ v))))
            record("norm_identity_j0", p, m, abs(w0 - ref0) / ref0,
                   abs(w0 - ref0) / ref0 <= 1e-10)
            w1 = discrete_norm(v, 1, spec)
            ref1 = float(np.sqrt(np.real(np.vdot(v, (S + M) @ v))))
            record("norm_identity_j1", p, m, abs(w1 - ref1) / ref1,
                   abs(w1 - ref1) / ref1 <= 1e-10)

            wv = rng.standard_normal(dm.total)
            lhs = float(np.sum(lam * _coefficients(spec, v).conj()
                               * _coefficients(spec, wv)).real)
            rhs = float(np.real(np.vdot(v, (S + M) @ wv)))
            scale = max(abs(rhs), 1.0)
            record("operator_identity", p, m, abs(lhs - rhs) / scale,
                   abs(lhs - rhs) / scale <= 1e-10)

            roundtrip = discrete_norm(apply_power(spec, v, -0.5), 1, spec)
            record("power_roundtrip", p, m, abs(roundtrip - w0) / ref0,
                   abs(roundtrip - w0) / ref0 <= 1e-10)

            lam_h2[m] = float(lam[-1]) * mesh.h ** 2

            J = assemble_penalty(mesh, dm, gamma_constant(p, (1.0,) * p))
            num = float(np.sqrt(np.real(np.vdot(v, (S + J + M) @ v))))
            ratio = num / ref1
            record("penalized_norm_equivalence", p, m, ratio,
                   0.1 <= ratio <= 10.0)

            gamma0[m] = coercivity_threshold(mesh, dm)
            record("coercivity_threshold_negative", p, m,
                   gamma0[m].gamma0_experimental,
                   gamma0[m].gamma0_experimental < 0.0)

        pairs = list(zip(sorted(ms)[:-1], sorted(ms)[1:]))
        for m1, m2 in pairs:
            r = lam_h2[m2] / lam_h2[m1]
            record("lambda_max_h2_ratio", p, (m1, m2), r, 0.5 <= r <= 2.0)
            g1 = gamma0[m1].gamma0_experimental
            g2 = gamma0[m2].gamma0_experimental
            rel = abs(g1 - g2) / max(abs(g1), abs(g2))
            record("coercivity_threshold_mesh_stability", p, (m1, m2), rel,
                   rel <= 0.20)

    return {"checks": checks, "all_passed": all(c["passed"] for c in checks)}

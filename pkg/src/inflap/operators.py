"""The second-order differential operators applied to a MapJet.

The full operator splits into a tangential part Du ⊗ Du : D²u and a normal
part |Du|² [Du]^perp Δu, where [Du]^perp projects onto the orthogonal
complement of the range of the jacobian.  The two parts are mutually
perpendicular, which the tests exercise on random jets.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

__all__ = [
    "OperatorValue",
    "grad_norm_sq",
    "tangential",
    "orthogonal_projection",
    "normal",
    "infinity_laplacian",
    "perturbed_scalar",
]


@dataclass
class OperatorValue:
    """All operator pieces at one point; full = tangential + normal."""

    tangential: np.ndarray
    normal: np.ndarray
    full: np.ndarray
    grad_norm_sq: float
    singular_values: tuple[float, ...]


def grad_norm_sq(m) -> float:
    """Squared Frobenius norm of the jacobian, |Du|² = Du : Du."""
    j = m.jacobian
    return float(np.einsum("ai,ai->", j, j))


def tangential(m) -> np.ndarray:
    """Component a of Du ⊗ Du : D²u, i.e. sum over i, j, b of
    D_i u_a D_j u_b D²_ij u_b."""
    return np.einsum("ai,bj,bij->a", m.jacobian, m.jacobian, m.hessian)


def _svd_left(j: np.ndarray):
    u, s, _ = np.linalg.svd(j, full_matrices=False)
    return u, s


def orthogonal_projection(jacobian: np.ndarray, rank_tol: float = 1e-10) -> np.ndarray:
    """Projection onto the orthogonal complement of the jacobian's range.

    Left singular vectors with sigma > rank_tol * sigma_max span the range;
    P = I - sum of their outer products.  A zero jacobian projects onto
    everything (P = I).  P is symmetrized so P = P^T holds exactly.
    """
    if rank_tol <= 0.0:
        raise ValueError("rank_tol must be positive")
    j = np.asarray(jacobian, dtype=float)
    big_n = j.shape[0]
    u, s = _svd_left(j)
    p = np.eye(big_n)
    if s.size and s[0] > 0.0:
        keep = u[:, s > rank_tol * s[0]]
        p -= keep @ keep.T
    return 0.5 * (p + p.T)


def normal(m, rank_tol: float = 1e-10) -> np.ndarray:
    """|Du|² [Du]^perp Δu; identically zero for scalar maps."""
    lap = np.einsum("bii->b", m.hessian)
    return grad_norm_sq(m) * (orthogonal_projection(m.jacobian, rank_tol) @ lap)


def infinity_laplacian(m, rank_tol: float = 1e-10) -> OperatorValue:
    """Assemble the full operator with its tangential/normal split.

    Singular values of the jacobian are reported so that points near a
    rank transition of the projection stay auditable.
    """
    j = np.asarray(m.jacobian, dtype=float)
    g = float(np.einsum("ai,ai->", j, j))
    tang = np.einsum("ai,bj,bij->a", j, j, m.hessian)
    lap = np.einsum("bii->b", m.hessian)
    u, s = _svd_left(j)
    p = np.eye(j.shape[0])
    if s.size and s[0] > 0.0:
        keep = u[:, s > rank_tol * s[0]]
        p -= keep @ keep.T
    p = 0.5 * (p + p.T)
    norm_part = g * (p @ lap)
    return OperatorValue(
        tangential=tang,
        normal=norm_part,
        full=tang + norm_part,
        grad_norm_sq=g,
        singular_values=tuple(float(x) for x in s),
    )


def perturbed_scalar(v, f) -> float:
    """Scalar residual Dv ⊗ Dv : D²v + Dv · DF for two scalar jets."""
    if v.N != 1 or f.N != 1:
        raise ValueError("perturbed_scalar needs scalar (N = 1) jets")
    if v.n != f.n:
        raise ValueError(f"source dimension mismatch: {v.n} != {f.n}")
    dv = v.jacobian[0]
    return float(dv @ v.hessian[0] @ dv + dv @ f.jacobian[0])

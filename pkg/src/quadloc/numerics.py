"""Tolerance-aware dense linear algebra primitives.

Every rank decision in the package goes through this module so that the
full-rank / rank-deficient branching of the solver is controlled by a
single pair of cutoffs:

* ``rank_rel``: a singular value counts toward the rank only if it
  exceeds ``rank_rel`` times the largest singular value.
* ``geom_abs``: absolute cutoff for geometric residual tests, scaled by
  the norms of the participating quantities where appropriate.

All functions are pure and operate on plain ``numpy`` arrays.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

__all__ = [
    "Tolerance",
    "DEFAULT_TOLERANCE",
    "rank_with_tolerance",
    "kernel_orthonormal_basis",
    "particular_solution",
    "orthonormal_complement",
    "orthonormal_span",
    "fix_sign",
]


@dataclass(frozen=True)
class Tolerance:
    """Numerical cutoffs shared by every stage of the pipeline.

    Parameters
    ----------
    rank_rel : float
        Relative singular-value cutoff for rank decisions, in ``(0, 1)``.
    geom_abs : float
        Absolute cutoff for residual and classification tests.
    """

    rank_rel: float = 1e-9
    geom_abs: float = 1e-9

    def __post_init__(self) -> None:
        if not 0.0 < self.rank_rel < 1.0:
            raise ValueError(f"rank_rel must lie in (0, 1), got {self.rank_rel}")
        if self.geom_abs <= 0.0:
            raise ValueError(f"geom_abs must be positive, got {self.geom_abs}")


DEFAULT_TOLERANCE = Tolerance()


def _as_matrix(matrix) -> np.ndarray:
    out = np.asarray(matrix, dtype=float)
    if out.ndim != 2:
        raise ValueError(f"expected a 2-d array, got shape {out.shape}")
    if not np.all(np.isfinite(out)):
        raise ValueError("matrix entries must be finite")
    return out


def _as_vector(vector, length: int | None = None) -> np.ndarray:
    out = np.asarray(vector, dtype=float)
    if out.ndim != 1:
        raise ValueError(f"expected a 1-d array, got shape {out.shape}")
    if not np.all(np.isfinite(out)):
        raise ValueError("vector entries must be finite")
    if length is not None and out.size != length:
        raise ValueError(f"expected length {length}, got {out.size}")
    return out


def fix_sign(vectors: np.ndarray, zero: float = 1e-12) -> np.ndarray:
    """Flip basis vectors so the first non-negligible coordinate is positive.

    Resolves the sign ambiguity of SVD-derived bases and makes basis
    vectors deterministic, testable outputs.  ``vectors`` holds one basis
    vector per row.
    """
    vectors = np.array(vectors, dtype=float, copy=True)
    for row in vectors:
        for entry in row:
            if abs(entry) > zero:
                if entry < 0.0:
                    row *= -1.0
                break
    return vectors


def rank_with_tolerance(matrix, tol: Tolerance = DEFAULT_TOLERANCE) -> int:
    """Numerical rank: number of singular values above the relative cutoff.

    Returns 0 for a matrix whose largest singular value vanishes.
    """
    m = _as_matrix(matrix)
    if m.size == 0:
        return 0
    svals = np.linalg.svd(m, compute_uv=False)
    if svals.size == 0 or svals[0] == 0.0:
        return 0
    return int(np.count_nonzero(svals > tol.rank_rel * svals[0]))


def kernel_orthonormal_basis(matrix, tol: Tolerance = DEFAULT_TOLERANCE) -> np.ndarray:
    """Orthonormal basis of the numerical kernel, one vector per row.

    The result has ``cols - rank_with_tolerance(matrix)`` rows; each basis
    vector ``v`` satisfies ``|matrix @ v| <= geom_abs * |matrix|``.
    """
    m = _as_matrix(matrix)
    cols = m.shape[1]
    if m.shape[0] == 0 or not m.any():
        return fix_sign(np.eye(cols))
    _, svals, vh = np.linalg.svd(m)
    rank = int(np.count_nonzero(svals > tol.rank_rel * svals[0])) if svals.size else 0
    return fix_sign(vh[rank:])


def particular_solution(
    matrix, rhs, tol: Tolerance = DEFAULT_TOLERANCE
) -> np.ndarray | None:
    """Minimum-norm solution of ``matrix @ x = rhs``, or ``None``.

    ``None`` signals that ``rhs`` lies outside the numerical column space:
    the least-squares residual exceeds ``geom_abs * (|matrix| + |rhs|)``.
    Infeasibility is a value, not an error.
    """
    m = _as_matrix(matrix)
    b = _as_vector(rhs, m.shape[0])
    x, *_ = np.linalg.lstsq(m, b, rcond=tol.rank_rel)
    residual = float(np.linalg.norm(m @ x - b))
    bound = tol.geom_abs * (np.linalg.norm(m) + np.linalg.norm(b))
    if residual > bound:
        return None
    return x


def orthonormal_span(vectors, ambient_dim: int, tol: Tolerance = DEFAULT_TOLERANCE) -> np.ndarray:
    """Orthonormal basis (rows) of the span of the given vectors."""
    stack = _stack(vectors, ambient_dim)
    if stack.shape[0] == 0 or not stack.any():
        return np.zeros((0, ambient_dim))
    _, svals, vh = np.linalg.svd(stack)
    rank = int(np.count_nonzero(svals > tol.rank_rel * svals[0])) if svals.size else 0
    return fix_sign(vh[:rank])


def orthonormal_complement(
    vectors, ambient_dim: int, tol: Tolerance = DEFAULT_TOLERANCE
) -> np.ndarray:
    """Orthonormal basis (rows) of the orthogonal complement of the span.

    The result has ``ambient_dim - rank(span)`` rows.  An empty input
    yields an orthonormal basis of the whole space.
    """
    stack = _stack(vectors, ambient_dim)
    return kernel_orthonormal_basis(stack, tol) if stack.shape[0] else fix_sign(np.eye(ambient_dim))


def _stack(vectors, ambient_dim: int) -> np.ndarray:
    rows = [_as_vector(v, ambient_dim) for v in vectors]
    if not rows:
        return np.zeros((0, ambient_dim))
    return np.vstack(rows)

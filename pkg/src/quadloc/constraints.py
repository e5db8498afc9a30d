"""Intersection of the solution set with affine position constraints.

A constraint such as "the receiver is on the floor plane" is an affine
subspace of position space.  Substituting it into the parametrized
solution set leaves an at most quadratic condition on the remaining
parameters, so a transversal plane-conic intersection yields zero, one
or two candidate positions; tangential intersections collapse to one
flagged candidate and positive-dimensional intersections are returned
as seeded samples with a flag.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .model import FullRankFrame, RankDeficientFrame, Scenario, SolutionSet
from .numerics import Tolerance, kernel_orthonormal_basis, orthonormal_complement

__all__ = [
    "AffineConstraint",
    "Candidate",
    "IntersectionResult",
    "intersect_with_affine",
    "feasible_candidates",
]


@dataclass(frozen=True, eq=False)
class AffineConstraint:
    """An affine subspace of position space, e.g. a ground plane.

    ``basis`` holds orthonormal direction rows; the subspace is
    ``base + span(basis)``.
    """

    base: np.ndarray
    basis: np.ndarray

    def __post_init__(self) -> None:
        object.__setattr__(self, "base", np.asarray(self.base, dtype=float))
        object.__setattr__(self, "basis", np.atleast_2d(np.asarray(self.basis, dtype=float)))
        gram = self.basis @ self.basis.T
        if not np.allclose(gram, np.eye(self.basis.shape[0]), atol=1e-8):
            raise ValueError("constraint basis must be orthonormal")
        if not np.all(np.isfinite(self.base)):
            raise ValueError("constraint base must be finite")

    @property
    def dim(self) -> int:
        return self.basis.shape[0]

    def distance(self, point) -> float:
        rel = np.asarray(point, dtype=float) - self.base
        return float(np.linalg.norm(rel - (self.basis @ rel) @ self.basis))


@dataclass(eq=False)
class Candidate:
    """A constrained position candidate with its clock bias."""

    x: np.ndarray
    b: float
    residual: float
    feasible: bool | None = None
    tangent: bool = False
    on_continuum: bool = False


@dataclass(frozen=True, eq=False)
class IntersectionResult:
    """Candidate list plus flags; iterates like a list of candidates."""

    candidates: tuple[Candidate, ...]
    positive_dimensional: bool = False
    diagnostic: str | None = None

    def __iter__(self):
        return iter(self.candidates)

    def __len__(self) -> int:
        return len(self.candidates)

    def __getitem__(self, idx):
        return self.candidates[idx]


def _parameter_map(sol: SolutionSet):
    """Affine map from solution parameters to positions, and the poly."""
    frame = sol.frame
    n = frame.n
    if isinstance(frame, FullRankFrame):
        columns = [frame.bias_direction] + list(frame.transverse_basis)
        quad_diag = np.concatenate([[sol.poly.bias_sq], np.ones(frame.k)])
        lin = np.concatenate([[sol.poly.bias_lin], np.zeros(frame.k)])
    else:
        columns = list(frame.transverse_basis)
        quad_diag = np.ones(frame.k)
        lin = np.zeros(frame.k)
    M = np.array(columns, dtype=float).T if columns else np.zeros((n, 0))
    return M, quad_diag, lin, float(sol.poly.const)


def intersect_with_affine(
    sol: SolutionSet,
    frame,
    con: AffineConstraint,
    tol: Tolerance,
) -> IntersectionResult:
    """Candidate positions on both the solution set and the constraint.

    Substitutes the constraint equations into the affine parametrization
    of the solution set and solves the restricted quadratic.  Candidates
    whose geometric position coincides are merged, keeping the bias that
    satisfies the inequalities if one does.  When the constraint misses
    the solution set's affine hull the result is empty with a
    diagnostic.
    """
    if sol.is_empty:
        return IntersectionResult((), diagnostic="solution set is empty")
    scale = frame.scale

    M, quad_diag, lin, const = _parameter_map(sol)
    normals = orthonormal_complement(con.basis, frame.n, tol)
    if normals.shape[0] == 0:
        raise ValueError("constraint must be a proper subspace of position space")

    # normals @ (x(p) - base) = 0  with  x(p) = base_point + M p
    L = normals @ M
    r = normals @ (con.base - frame.base_point)
    p0, *_ = np.linalg.lstsq(L, r, rcond=tol.rank_rel)
    gap = float(np.linalg.norm(L @ p0 - r))
    if gap > tol.geom_abs * scale * 10.0:
        return IntersectionResult(
            (), diagnostic="constraint does not meet the solution set's affine hull"
        )
    N = kernel_orthonormal_basis(L, tol).T  # columns span the free directions

    # restrict the quadratic to p = p0 + N z
    D = np.diag(quad_diag)
    Q = N.T @ D @ N
    lin_z = 2.0 * N.T @ D @ p0 + N.T @ lin
    const_z = float(p0 @ D @ p0 + lin @ p0 + const)

    free = N.shape[1]
    candidates: list[Candidate] = []
    positive_dim = False
    if free == 0:
        if abs(const_z) <= tol.geom_abs * scale * scale:
            candidates.append(_make_candidate(sol, con, p0))
    elif free == 1:
        a = float(Q[0, 0])
        b = float(lin_z[0])
        c = const_z
        coeff_norm = max(abs(a), abs(b) / max(scale, 1.0), abs(c) / max(scale, 1.0) ** 2)
        band = tol.geom_abs * max(coeff_norm, tol.geom_abs) * scale * scale
        if abs(a) <= tol.geom_abs * max(abs(b) / scale, abs(c) / (scale * scale), 1.0):
            if abs(b) > tol.geom_abs * scale:
                candidates.append(_make_candidate(sol, con, p0 + (-c / b) * N[:, 0]))
            elif abs(c) <= tol.geom_abs * scale * scale:
                positive_dim = True
        else:
            disc = b * b - 4.0 * a * c
            if abs(disc) <= band:
                z = -b / (2.0 * a)
                candidates.append(_make_candidate(sol, con, p0 + z * N[:, 0], tangent=True))
            elif disc > 0.0:
                sq = np.sqrt(disc)
                q = -0.5 * (b + np.copysign(sq, b))
                for z in (q / a, c / q):
                    candidates.append(_make_candidate(sol, con, p0 + z * N[:, 0]))
    else:
        positive_dim = True

    if positive_dim:
        samples = _sample_restricted(sol, con, p0, N, Q, lin_z, const_z, tol, scale)
        if not samples:
            return IntersectionResult(
                (), diagnostic="constraint does not meet the solution set"
            )
        return IntersectionResult(tuple(samples), positive_dimensional=True)

    return IntersectionResult(tuple(_merge_positions(candidates, tol, scale)))


def _make_candidate(sol, con, params, tangent=False, on_continuum=False) -> Candidate:
    b, x = sol.embed(params[0] if sol.poly.has_bias else 0.0, params[1:] if sol.poly.has_bias else params)
    poly_val = sol.poly(b, params[1:] if sol.poly.has_bias else params)
    residual = max(abs(poly_val), con.distance(x) * sol.frame.scale)
    return Candidate(x=x, b=b, residual=residual, tangent=tangent, on_continuum=on_continuum)


def _merge_positions(cands: list[Candidate], tol: Tolerance, scale: float) -> list[Candidate]:
    """Merge candidates sharing a position, preferring the lower bias.

    The same point can appear with two biases when the bias does not
    move the position (all pseudoranges equal); the lower bias is the
    one that can satisfy the inequalities.
    """
    merged: list[Candidate] = []
    for cand in cands:
        for kept in merged:
            if np.linalg.norm(kept.x - cand.x) <= 100.0 * tol.geom_abs * scale:
                if cand.b < kept.b:
                    kept.b = cand.b
                    kept.residual = max(kept.residual, cand.residual)
                break
        else:
            merged.append(cand)
    return merged


def _sample_restricted(sol, con, p0, N, Q, lin_z, const_z, tol, scale, count=32, seed=0):
    """Seeded samples of a positive-dimensional intersection.

    Solves the restricted quadratic for its strongest coordinate with
    the remaining coordinates drawn from a window of three scale units.
    """
    rng = np.random.default_rng(seed)
    free = N.shape[1]
    diag = np.abs(np.diag(Q))
    j = int(np.argmax(diag)) if diag.size else 0
    out: list[Candidate] = []
    quadratic = diag[j] > tol.geom_abs
    for _ in range(count * 8):
        if len(out) >= count:
            break
        z = rng.uniform(-3.0 * scale, 3.0 * scale, size=free)
        if quadratic:
            others = z.copy()
            others[j] = 0.0
            a = float(Q[j, j])
            b = float(2.0 * Q[j] @ others + lin_z[j])
            c = float(others @ Q @ others + lin_z @ others + const_z)
            disc = b * b - 4.0 * a * c
            if disc < 0.0:
                continue
            z[j] = (-b + np.sqrt(disc)) / (2.0 * a) if rng.random() < 0.5 else \
                (-b - np.sqrt(disc)) / (2.0 * a)
        else:
            lin_j = float(lin_z[j])
            if abs(lin_j) <= tol.geom_abs:
                if abs(const_z) > tol.geom_abs * scale * scale:
                    return []
            else:
                others = z.copy()
                others[j] = 0.0
                z[j] = -(float(others @ Q @ others + lin_z @ others) + const_z) / lin_j
        out.append(_make_candidate(sol, con, p0 + N @ z, on_continuum=True))
    return out


def feasible_candidates(cands, sc: Scenario) -> list[Candidate]:
    """Keep the candidates satisfying every inequality ``t_i >= b``.

    Order is preserved; the ``feasible`` flag is filled in on every
    input candidate.
    """
    tol = sc.tol.geom_abs * sc.scale
    out = []
    for cand in cands:
        cand.feasible = bool(np.min(sc.pseudoranges - cand.b) >= -tol)
        if cand.feasible:
            out.append(cand)
    return out

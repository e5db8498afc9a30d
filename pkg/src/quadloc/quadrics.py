"""Classification of the solution and satellite quadrics.

Both quadrics are surfaces of revolution around the common axis
``base_point + R * bias_direction`` (when a bias direction exists).  The
classification reads the type and all geometric parameters (center,
vertices, foci, semiaxes, eccentricity, semilatus rectum) off the
canonical frame, covering the degenerate kinds as well: spheres, affine
subspaces, lines, point pairs, single points, cones, cylinders and
one-sheet hyperboloids.

The two classifications are duals of each other: the foci of one are
the vertices of the other, the eccentricities are reciprocal, and they
share the axis while spanning perpendicular affine hulls.
:func:`duality_report` verifies all of this numerically.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .model import (
    FullRankFrame,
    QuadricDescriptor,
    QuadricKind,
    RankDeficientFrame,
    SatelliteLocus,
    SolutionSet,
)
from .numerics import Tolerance, orthonormal_complement
from .solver import finite_solutions, frame_constants

__all__ = [
    "NEAR_PARABOLIC_BAND",
    "classify_solution_quadric",
    "classify_satellite_quadric",
    "DualityCheck",
    "DualityReport",
    "duality_report",
    "sample_points",
    "descriptor_residual",
    "tangency_deviation",
]

NEAR_PARABOLIC_BAND = 1e-6


def _unit_axis(frame: FullRankFrame) -> np.ndarray:
    return frame.bias_direction / frame.bias_norm


def _solution_hull(frame) -> tuple[np.ndarray, np.ndarray]:
    """Base point and orthonormal direction rows of the solution hull."""
    if isinstance(frame, RankDeficientFrame) or frame.bias_norm <= frame.tol.geom_abs:
        return frame.base_point, frame.transverse_basis
    rows = np.vstack([_unit_axis(frame)[None, :], frame.transverse_basis]) \
        if frame.k else _unit_axis(frame)[None, :]
    return frame.base_point, rows


def _satellite_hull(frame) -> tuple[np.ndarray, np.ndarray]:
    """Base point and orthonormal direction rows of the emitter hull."""
    if isinstance(frame, RankDeficientFrame):
        return frame.base_point, frame.span_basis
    if frame.bias_norm <= frame.tol.geom_abs:
        return frame.base_point, frame.span_basis
    axis = _unit_axis(frame)
    # the emitter span is the complement of (transverse directions, axis),
    # built from unit vectors so no cancellation can fake a direction
    blockers = np.vstack([frame.transverse_basis, axis[None, :]])
    transverse = orthonormal_complement(blockers, frame.n, frame.tol)
    return frame.base_point, np.vstack([axis[None, :], transverse])


def classify_solution_quadric(frame, sol: SolutionSet) -> QuadricDescriptor:
    """Classified geometry of the set of positions solving the squared system."""
    if isinstance(frame, RankDeficientFrame):
        return _classify_rank_deficient_solution(frame)
    return _classify_full_rank(frame, sol, side="solution")


def classify_satellite_quadric(frame, sol: SolutionSet) -> SatelliteLocus:
    """Classified locus of (time, position) pairs consistent with all solutions.

    When the squared system has more than one solution the frame
    equations characterize the locus completely.  With one solution the
    frame quadric is a proper subset of the locus (``complete`` is
    false) and membership is the cone condition around that solution;
    with no solution every pair belongs.
    """
    if isinstance(frame, RankDeficientFrame):
        descriptor = _classify_rank_deficient_satellite(frame)
    else:
        descriptor = _classify_full_rank(frame, sol, side="satellite")

    complete = sol.count_hint in ("two", "infinite")
    kwargs: dict = {}
    if sol.count_hint == "one":
        (b0, x0), = finite_solutions(sol)
        kwargs = {"map_kind": "cone", "anchor_bias": b0, "anchor_point": x0}
    elif sol.count_hint == "zero":
        kwargs = {"map_kind": "unconstrained"}
    elif isinstance(frame, RankDeficientFrame):
        kwargs = {
            "map_kind": "two_valued",
            "fixed_bias": frame.fixed_bias,
            "center": frame.base_point,
            "radius_sq": frame.radius_sq,
        }
    else:
        kwargs = {
            "map_kind": "affine",
            "map_direction": frame.bias_direction,
            "map_offset": frame.time_offset,
        }
    return SatelliteLocus(descriptor=descriptor, complete=complete, **kwargs)


def _classify_rank_deficient_solution(frame: RankDeficientFrame) -> QuadricDescriptor:
    base, rows = _solution_hull(frame)
    eps_quad = frame.tol.geom_abs * frame.scale**2
    r2 = frame.radius_sq
    common = dict(ambient_base=base, ambient_basis=rows, center=frame.base_point)
    if abs(r2) <= eps_quad:
        return QuadricDescriptor(
            kind=QuadricKind.SINGLE_POINT, vertices=(frame.base_point.copy(),),
            eccentricity=0.0, **common,
        )
    if r2 < 0.0 or frame.k == 0:
        return QuadricDescriptor(kind=QuadricKind.EMPTY, **common)
    radius = math.sqrt(r2)
    if frame.k == 1:
        pts = (
            frame.base_point + radius * frame.transverse_basis[0],
            frame.base_point - radius * frame.transverse_basis[0],
        )
        return QuadricDescriptor(
            kind=QuadricKind.PAIR_OF_POINTS, vertices=pts, eccentricity=0.0,
            semiaxis_major=radius, semiaxis_minor=radius, **common,
        )
    return QuadricDescriptor(
        kind=QuadricKind.SPHERE, semiaxis_major=radius, semiaxis_minor=radius,
        eccentricity=0.0, **common,
    )


def _classify_rank_deficient_satellite(frame: RankDeficientFrame) -> QuadricDescriptor:
    base, rows = _satellite_hull(frame)
    return QuadricDescriptor(
        kind=QuadricKind.AFFINE_SUBSPACE,
        ambient_base=base,
        ambient_basis=rows,
        eccentricity_infinite=True,
    )


def _classify_full_rank(frame: FullRankFrame, sol: SolutionSet, side: str) -> QuadricDescriptor:
    tol: Tolerance = frame.tol
    scale = frame.scale
    eps = tol.geom_abs
    eps_lin = eps * scale
    eps_quad = eps * scale * scale
    consts = frame_constants(frame)
    e = consts["e"]
    c1, c0 = consts["c1"], consts["c0"]
    v = frame.base_point
    near = abs(e - 1.0) <= NEAR_PARABOLIC_BAND

    base, rows = (_solution_hull if side == "solution" else _satellite_hull)(frame)
    common = dict(ambient_base=base, ambient_basis=rows, near_parabolic=near)

    if side == "solution" and sol.is_empty and sol.inconsistent_row is not None:
        # emptied by an inconsistent redundant measurement, not by the frame
        return QuadricDescriptor(kind=QuadricKind.EMPTY, **common)

    if e <= eps:
        return _classify_equal_times(frame, consts, side, common)

    axis = dict(axis_point=v, axis_direction=_unit_axis(frame))
    transverse_dim = rows.shape[0] - 1

    if abs(e - 1.0) <= eps:
        if abs(c1) <= eps_lin:
            if abs(c0) <= eps_quad:
                return QuadricDescriptor(kind=QuadricKind.LINE, **axis, **common)
            wants = c0 < 0.0 if side == "solution" else c0 > 0.0
            if not wants or transverse_dim == 0:
                return QuadricDescriptor(kind=QuadricKind.EMPTY, **common)
            return QuadricDescriptor(
                kind=QuadricKind.CYLINDER, semiaxis_minor=math.sqrt(abs(c0)),
                eccentricity=1.0, **axis, **common,
            )
        return _classify_parabolic(frame, consts, side, transverse_dim, axis, common)

    return _classify_central(frame, consts, side, transverse_dim, axis, common)


def _classify_equal_times(frame, consts, side, common) -> QuadricDescriptor:
    """All pseudoranges equal: emitters on a sphere, solutions on its axis."""
    alpha = frame.time_offset
    r2 = max(consts["c0"] + alpha * alpha, 0.0)
    radius = math.sqrt(r2)
    v = frame.base_point
    if side == "solution":
        if frame.k == 0:
            return QuadricDescriptor(
                kind=QuadricKind.SINGLE_POINT, vertices=(v.copy(),),
                center=v, eccentricity_infinite=True, **common,
            )
        kind = QuadricKind.FULL_SPACE if frame.k == frame.n else QuadricKind.AFFINE_SUBSPACE
        return QuadricDescriptor(kind=kind, eccentricity_infinite=True, **common)
    span_dim = common["ambient_basis"].shape[0]
    if radius <= frame.tol.geom_abs * frame.scale:
        return QuadricDescriptor(
            kind=QuadricKind.SINGLE_POINT, vertices=(v.copy(),), center=v,
            eccentricity=0.0, **common,
        )
    if span_dim == 1:
        direction = common["ambient_basis"][0]
        pts = (v + radius * direction, v - radius * direction)
        return QuadricDescriptor(
            kind=QuadricKind.PAIR_OF_POINTS, vertices=pts, center=v,
            semiaxis_major=radius, semiaxis_minor=radius, eccentricity=0.0, **common,
        )
    return QuadricDescriptor(
        kind=QuadricKind.SPHERE, center=v, semiaxis_major=radius,
        semiaxis_minor=radius, eccentricity=0.0, **common,
    )


def _classify_parabolic(frame, consts, side, transverse_dim, axis, common) -> QuadricDescriptor:
    """Unit bias direction with a nonvanishing linear part: paraboloids."""
    u = frame.bias_direction
    v = frame.base_point
    c1 = consts["c1"]
    lam1, lam2 = consts["vertex_coord"], consts["focus_coord"]
    ell = 0.5 * abs(c1)
    if side == "solution":
        vertex, focus = v + lam1 * u, v + lam2 * u
        opening = -math.copysign(1.0, c1)
    else:
        vertex, focus = v + lam2 * u, v + lam1 * u
        opening = math.copysign(1.0, c1)
    axis = dict(axis, axis_direction=opening * axis["axis_direction"])
    basis = common["ambient_basis"].copy()
    basis[0] = axis["axis_direction"]
    common = dict(common, ambient_basis=basis)
    if transverse_dim == 0:
        return QuadricDescriptor(
            kind=QuadricKind.SINGLE_POINT, vertices=(vertex,), eccentricity=1.0,
            **axis, **common,
        )
    return QuadricDescriptor(
        kind=QuadricKind.PARABOLOID, vertices=(vertex,), foci=(focus,),
        eccentricity=1.0, semilatus_rectum=ell, **axis, **common,
    )


def _classify_central(frame, consts, side, transverse_dim, axis, common) -> QuadricDescriptor:
    """Nonzero, nonunit bias direction: the central quadric families.

    In centered coordinates the solution constraint is
    ``|y|^2 + c2 (b + mu)^2 = level`` and the emitter constraint is
    ``|z|^2 = e^2 c2 (z0 + mu)^2 - level``, so the roles of the sign
    pattern ``(c2, level)`` flip between the two sides.
    """
    tol, scale = frame.tol, frame.scale
    eps_quad = tol.geom_abs * scale * scale
    e, c2 = consts["e"], consts["c2"]
    mu, level = consts["mu"], consts["level"]
    u = frame.bias_direction
    center = frame.base_point - mu * u
    ratio = level / c2
    ecc = 1.0 / e if side == "solution" else e
    common = dict(common, center=center)
    flip = -1.0 if side == "satellite" else 1.0
    shape_sign = flip * c2
    level_sign = flip * level

    if abs(level) <= eps_quad:
        if shape_sign > 0.0 or transverse_dim == 0:
            return QuadricDescriptor(
                kind=QuadricKind.SINGLE_POINT, vertices=(center.copy(),),
                eccentricity=ecc, **axis, **common,
            )
        return QuadricDescriptor(
            kind=QuadricKind.CONE, eccentricity=ecc, **axis, **common,
        )

    if shape_sign > 0.0 and level_sign < 0.0:
        return QuadricDescriptor(kind=QuadricKind.EMPTY, **common)

    if shape_sign < 0.0 and level_sign > 0.0:
        if transverse_dim == 0:
            return QuadricDescriptor(kind=QuadricKind.EMPTY, **common)
        waist = math.sqrt(abs(level))
        axis_scale = math.sqrt(-ratio) * (e if side == "solution" else 1.0)
        return QuadricDescriptor(
            kind=QuadricKind.HYPERBOLOID_ONE_SHEET, eccentricity=ecc,
            semiaxis_major=axis_scale, semiaxis_minor=waist, **axis, **common,
        )

    root = math.sqrt(ratio)
    if side == "solution":
        vertex_step, focus_step = root, root / e
        semi_major = e * root
        semilatus = math.sqrt(level * c2) / e
    else:
        vertex_step, focus_step = root / e, root
        semi_major = root
        semilatus = math.sqrt(level * c2)
    vertices = (center + vertex_step * u, center - vertex_step * u)
    foci = (center + focus_step * u, center - focus_step * u)
    semi_minor = math.sqrt(abs(level))
    if transverse_dim == 0:
        kind = QuadricKind.PAIR_OF_POINTS
    elif shape_sign > 0.0:
        kind = QuadricKind.PROLATE_SPHEROID
    else:
        kind = QuadricKind.HYPERBOLOID_TWO_SHEETS
    return QuadricDescriptor(
        kind=kind, vertices=vertices, foci=foci, semiaxis_major=semi_major,
        semiaxis_minor=semi_minor, eccentricity=ecc, semilatus_rectum=semilatus,
        **axis, **common,
    )


# ---------------------------------------------------------------------------
# residuals and sampling


def _hull_coordinates(q: QuadricDescriptor, p) -> tuple[float, np.ndarray, float]:
    """Axial coordinate, transverse coordinates and off-hull distance."""
    p = np.asarray(p, dtype=float)
    rel = p - q.ambient_base
    coords = q.ambient_basis @ rel if q.dim else np.zeros(0)
    recon = coords @ q.ambient_basis if q.dim else np.zeros_like(rel)
    off = float(np.linalg.norm(rel - recon))
    if q.axis_direction is not None:
        ref = q.center if q.center is not None else (
            q.vertices[0] if q.vertices else q.ambient_base
        )
        rel_ref = p - ref
        zeta = float(q.axis_direction @ rel_ref)
        in_hull = q.ambient_basis @ rel_ref @ q.ambient_basis
        trans = in_hull - zeta * q.axis_direction
        return zeta, trans, off
    return 0.0, coords, off


def _signed_value(q: QuadricDescriptor, p) -> float | None:
    """Implicit equation value at a point assumed close to the hull."""
    zeta, trans, _ = _hull_coordinates(q, p)
    r2 = float(trans @ trans) if isinstance(trans, np.ndarray) else 0.0
    kind = q.kind
    if kind == QuadricKind.PROLATE_SPHEROID:
        return zeta**2 / q.semiaxis_major**2 + r2 / q.semiaxis_minor**2 - 1.0
    if kind == QuadricKind.HYPERBOLOID_TWO_SHEETS:
        return zeta**2 / q.semiaxis_major**2 - r2 / q.semiaxis_minor**2 - 1.0
    if kind == QuadricKind.HYPERBOLOID_ONE_SHEET:
        return r2 / q.semiaxis_minor**2 - zeta**2 / q.semiaxis_major**2 - 1.0
    if kind == QuadricKind.PARABOLOID:
        return r2 - 2.0 * q.semilatus_rectum * zeta
    if kind == QuadricKind.CONE:
        slope_sq = q.eccentricity**2 - 1.0
        return r2 - slope_sq * zeta**2
    if kind == QuadricKind.CYLINDER:
        return r2 - q.semiaxis_minor**2
    if kind == QuadricKind.SPHERE:
        d = np.asarray(p, dtype=float) - q.center
        return float(d @ d) - q.semiaxis_major**2
    return None


def descriptor_residual(q: QuadricDescriptor, p) -> float:
    """Relative deviation of a point from the classified quadric.

    Combines the distance to the affine hull with the implicit equation
    of the kind; both are normalized by the local magnitude so a return
    value below the geometric tolerance means the point lies on the
    quadric.
    """
    p = np.asarray(p, dtype=float)
    zeta, trans, off = _hull_coordinates(q, p)
    local = max(1.0, float(np.linalg.norm(p - q.ambient_base)))
    off_rel = off / local
    kind = q.kind
    if kind in (QuadricKind.AFFINE_SUBSPACE, QuadricKind.FULL_SPACE):
        return off_rel
    if kind == QuadricKind.LINE:
        rel = p - q.axis_point
        gap = rel - (rel @ q.axis_direction) * q.axis_direction
        return float(np.linalg.norm(gap)) / local
    if kind in (QuadricKind.SINGLE_POINT, QuadricKind.PAIR_OF_POINTS):
        pts = q.vertices if q.vertices else (q.center,)
        return min(float(np.linalg.norm(p - pt)) for pt in pts) / local
    if kind == QuadricKind.EMPTY:
        return float("inf")
    value = _signed_value(q, p)
    r2 = float(trans @ trans)
    if kind in (
        QuadricKind.PROLATE_SPHEROID,
        QuadricKind.HYPERBOLOID_TWO_SHEETS,
        QuadricKind.HYPERBOLOID_ONE_SHEET,
    ):
        return max(off_rel, abs(value))
    if kind == QuadricKind.PARABOLOID:
        scale = max(1.0, r2, 2.0 * q.semilatus_rectum * abs(zeta))
        return max(off_rel, abs(value) / scale)
    if kind == QuadricKind.CONE:
        slope_sq = q.eccentricity**2 - 1.0
        scale = max(1.0, r2, slope_sq * zeta * zeta)
        return max(off_rel, abs(value) / scale)
    if kind == QuadricKind.CYLINDER:
        return max(off_rel, abs(math.sqrt(r2) - q.semiaxis_minor) / max(1.0, q.semiaxis_minor))
    if kind == QuadricKind.SPHERE:
        d = float(np.linalg.norm(p - q.center))
        return max(off_rel, abs(d - q.semiaxis_major) / max(1.0, q.semiaxis_major))
    raise ValueError(f"unhandled kind {kind}")


def _transverse_unit(rng: np.random.Generator, q: QuadricDescriptor) -> np.ndarray:
    rows = q.ambient_basis[1:] if q.axis_direction is not None else q.ambient_basis
    if rows.shape[0] == 0:
        return np.zeros(q.ambient_base.size)
    coeff = rng.standard_normal(rows.shape[0])
    norm = np.linalg.norm(coeff)
    while norm < 1e-12:
        coeff = rng.standard_normal(rows.shape[0])
        norm = np.linalg.norm(coeff)
    return (coeff / norm) @ rows


def sample_points(q: QuadricDescriptor, count: int, seed: int) -> np.ndarray:
    """Deterministic points on a classified quadric, one per row.

    Unbounded kinds are sampled from a window of three major semiaxes
    around the center or vertex (three length units when no semiaxis is
    defined).  Points on a two-sheet hyperboloid alternate sheets.
    """
    if q.kind == QuadricKind.EMPTY:
        raise ValueError("cannot sample an empty quadric")
    rng = np.random.default_rng(seed)
    out = np.zeros((count, q.ambient_base.size))
    kind = q.kind

    if kind == QuadricKind.SINGLE_POINT:
        out[:] = q.vertices[0] if q.vertices else q.center
        return out
    if kind == QuadricKind.PAIR_OF_POINTS:
        for i in range(count):
            out[i] = q.vertices[i % 2]
        return out
    if kind in (QuadricKind.AFFINE_SUBSPACE, QuadricKind.FULL_SPACE):
        coeffs = rng.uniform(-3.0, 3.0, size=(count, q.dim))
        return q.ambient_base + coeffs @ q.ambient_basis
    if kind == QuadricKind.LINE:
        steps = rng.uniform(-3.0, 3.0, size=count)
        return q.axis_point + steps[:, None] * q.axis_direction
    if kind == QuadricKind.SPHERE:
        for i in range(count):
            out[i] = q.center + q.semiaxis_major * _transverse_unit(rng, q)
        return out

    axis = q.axis_direction
    if kind == QuadricKind.PROLATE_SPHEROID:
        a, b = q.semiaxis_major, q.semiaxis_minor
        for i in range(count):
            theta = rng.uniform(0.0, 2.0 * math.pi)
            out[i] = q.center + a * math.cos(theta) * axis \
                + b * math.sin(theta) * _transverse_unit(rng, q)
        return out
    if kind == QuadricKind.HYPERBOLOID_TWO_SHEETS:
        a, b = q.semiaxis_major, q.semiaxis_minor
        tmax = math.acosh(3.0)
        for i in range(count):
            tau = rng.uniform(0.0, tmax)
            sheet = 1.0 if i % 2 == 0 else -1.0
            out[i] = q.center + sheet * a * math.cosh(tau) * axis \
                + b * math.sinh(tau) * _transverse_unit(rng, q)
        return out
    if kind == QuadricKind.HYPERBOLOID_ONE_SHEET:
        a, b = q.semiaxis_major, q.semiaxis_minor
        for i in range(count):
            zeta = rng.uniform(-3.0 * a, 3.0 * a)
            r = b * math.sqrt(1.0 + (zeta / a) ** 2)
            out[i] = q.center + zeta * axis + r * _transverse_unit(rng, q)
        return out
    if kind == QuadricKind.PARABOLOID:
        ell = q.semilatus_rectum
        vertex = q.vertices[0]
        window = 3.0 * max(ell, 1.0)
        for i in range(count):
            r = rng.uniform(0.0, window)
            out[i] = vertex + (r * r / (2.0 * ell)) * axis + r * _transverse_unit(rng, q)
        return out
    if kind == QuadricKind.CONE:
        slope = math.sqrt(q.eccentricity**2 - 1.0)
        for i in range(count):
            zeta = rng.uniform(-3.0, 3.0)
            out[i] = q.center + zeta * axis + slope * abs(zeta) * _transverse_unit(rng, q)
        return out
    if kind == QuadricKind.CYLINDER:
        radius = q.semiaxis_minor
        window = 3.0 * max(radius, 1.0)
        for i in range(count):
            zeta = rng.uniform(-window, window)
            out[i] = q.axis_point + zeta * axis + radius * _transverse_unit(rng, q)
        return out
    raise ValueError(f"unhandled kind {kind}")


def hyperboloid_sheet(q: QuadricDescriptor, p) -> int:
    """Sheet sign of a point on a two-sheet hyperboloid (+1 or -1)."""
    return 1 if float(q.axis_direction @ (np.asarray(p, dtype=float) - q.center)) >= 0.0 else -1


# ---------------------------------------------------------------------------
# duality


@dataclass(frozen=True)
class DualityCheck:
    """Outcome of one duality property: applicability, verdict, deviation."""

    applicable: bool
    ok: bool | None = None
    deviation: float | None = None


@dataclass(frozen=True, eq=False)
class DualityReport:
    """Numerical verification of the solution/satellite duality."""

    axis_match: DualityCheck
    foci_vertex_swap: DualityCheck
    eccentricity_product: DualityCheck
    eccentricity_product_value: float | None
    spans_perpendicular: DualityCheck
    spans_intersection_is_axis: DualityCheck
    qsol_meets_asat_perpendicularly: DualityCheck

    @property
    def all_applicable_ok(self) -> bool:
        checks = (
            self.axis_match, self.foci_vertex_swap, self.eccentricity_product,
            self.spans_perpendicular, self.spans_intersection_is_axis,
            self.qsol_meets_asat_perpendicularly,
        )
        return all(c.ok for c in checks if c.applicable)


def _points_scale(*groups) -> float:
    mags = [1.0]
    for group in groups:
        for p in group:
            mags.append(float(np.linalg.norm(p)))
    return max(mags)


def _directed_match(src, dst) -> float:
    return max(
        min(float(np.linalg.norm(a - b)) for b in dst) for a in src
    )


def duality_report(
    qsol: QuadricDescriptor,
    qsat: QuadricDescriptor,
    tol: Tolerance,
    frame=None,
) -> DualityReport:
    """Check the dual relations between the two classified quadrics.

    Both descriptors must come from the same scenario (the function
    cannot detect a mismatch).  Checks that do not apply to the given
    pair of kinds are reported as not applicable.  When ``frame`` is
    given, the tangency of the solution quadric at its vertices against
    the emitter hull is verified from the embedded implicit equation.
    """
    scale = _points_scale(qsol.vertices, qsol.foci, qsat.vertices, qsat.foci,
                          [qsol.ambient_base, qsat.ambient_base])
    thresh = 100.0 * tol.geom_abs * scale

    if qsol.axis_direction is not None and qsat.axis_direction is not None:
        cosang = abs(float(qsol.axis_direction @ qsat.axis_direction))
        gap_dir = math.sqrt(max(0.0, 1.0 - min(cosang, 1.0) ** 2))
        rel = qsat.axis_point - qsol.axis_point
        gap_pt = float(np.linalg.norm(rel - (rel @ qsol.axis_direction) * qsol.axis_direction))
        dev = max(gap_dir * scale, gap_pt)
        axis_match = DualityCheck(True, dev <= thresh, dev)
    else:
        axis_match = DualityCheck(False)

    if qsol.vertices and qsat.foci and qsol.foci and qsat.vertices:
        dev = max(
            _directed_match(qsat.foci, qsol.vertices),
            _directed_match(qsol.vertices, qsat.foci),
            _directed_match(qsol.foci, qsat.vertices),
            _directed_match(qsat.vertices, qsol.foci),
        )
        swap = DualityCheck(True, dev <= thresh, dev)
    else:
        swap = DualityCheck(False)

    ecc_value: float | None = None
    if qsol.eccentricity_infinite or qsat.eccentricity_infinite:
        finite = qsat if qsol.eccentricity_infinite else qsol
        ok = finite.eccentricity is not None and abs(finite.eccentricity) <= 100.0 * tol.geom_abs
        ecc = DualityCheck(True, ok, finite.eccentricity)
    elif qsol.eccentricity is not None and qsat.eccentricity is not None:
        ecc_value = qsol.eccentricity * qsat.eccentricity
        dev = abs(ecc_value - 1.0)
        ecc = DualityCheck(True, dev <= 100.0 * tol.geom_abs, dev)
    else:
        ecc = DualityCheck(False)

    sol_rows = qsol.ambient_basis[1:] if qsol.axis_direction is not None else qsol.ambient_basis
    sat_rows = qsat.ambient_basis[1:] if qsat.axis_direction is not None else qsat.ambient_basis
    if sol_rows.shape[0] and sat_rows.shape[0]:
        dev = float(np.abs(sol_rows @ sat_rows.T).max())
        perp = DualityCheck(True, dev <= 100.0 * tol.geom_abs, dev)
    else:
        perp = DualityCheck(True, True, 0.0)

    inter = _intersection_check(qsol, qsat, tol, thresh)

    if frame is not None and qsol.vertices and not isinstance(frame, RankDeficientFrame):
        dev = max(tangency_deviation(frame, np.asarray(vx)) for vx in qsol.vertices)
        tang = DualityCheck(True, dev <= 100.0 * tol.geom_abs, dev)
    else:
        tang = DualityCheck(False)

    return DualityReport(
        axis_match=axis_match,
        foci_vertex_swap=swap,
        eccentricity_product=ecc,
        eccentricity_product_value=ecc_value,
        spans_perpendicular=perp,
        spans_intersection_is_axis=inter,
        qsol_meets_asat_perpendicularly=tang,
    )


def _hull_distance(q: QuadricDescriptor, p: np.ndarray) -> float:
    rel = p - q.ambient_base
    coords = q.ambient_basis @ rel if q.dim else np.zeros(0)
    recon = coords @ q.ambient_basis if q.dim else np.zeros_like(rel)
    return float(np.linalg.norm(rel - recon))


def _intersection_check(qsol, qsat, tol: Tolerance, thresh: float) -> DualityCheck:
    if qsol.axis_direction is not None and qsat.axis_direction is not None:
        stacked = np.vstack([qsol.ambient_basis, qsat.ambient_basis])
        svals = np.linalg.svd(stacked, compute_uv=False)
        shared = int(np.count_nonzero(svals > tol.rank_rel * svals[0]))
        expected = qsol.dim + qsat.dim - 1
        axis_in_sol = _hull_distance(qsol, qsol.ambient_base + qsat.axis_direction)
        axis_in_sat = _hull_distance(qsat, qsat.ambient_base + qsol.axis_direction)
        ok = shared == expected and max(axis_in_sol, axis_in_sat) <= thresh
        return DualityCheck(True, ok, max(axis_in_sol, axis_in_sat))
    kinds = {qsol.kind, qsat.kind}
    sphere = qsol if qsol.kind in (QuadricKind.SPHERE, QuadricKind.PAIR_OF_POINTS) else qsat
    other = qsat if sphere is qsol else qsol
    if sphere.center is not None and kinds & {QuadricKind.SPHERE, QuadricKind.PAIR_OF_POINTS}:
        # degenerate pairing: the sphere center is where the dual meets its hull
        dev = max(_hull_distance(other, sphere.center), _hull_distance(sphere, sphere.center))
        return DualityCheck(True, dev <= thresh, dev)
    return DualityCheck(False)


def tangency_deviation(frame: FullRankFrame, point: np.ndarray) -> float:
    """Angle deviation of the embedded solution gradient from the axis.

    At the vertices of the solution quadric the gradient of the
    embedded quadratic equation must be parallel to the bias direction,
    so the tangent space there is the transverse subspace.
    """
    consts = frame_constants(frame)
    u = frame.bias_direction
    e2 = frame.bias_norm**2
    rel = np.asarray(point, dtype=float) - frame.base_point
    y0 = float(u @ rel) / e2
    grad = (2.0 * consts["c2"] * y0 + consts["c1"]) / e2 * u
    if frame.k:
        y = frame.transverse_basis @ rel
        grad = grad + 2.0 * y @ frame.transverse_basis
    norm = float(np.linalg.norm(grad))
    if norm == 0.0:
        return 0.0
    axial = float(grad @ u) / frame.bias_norm
    return math.sqrt(max(norm * norm - axial * axial, 0.0)) / norm

"""End-to-end solution of the squared positioning problem.

The pipeline is: assemble the lifted linear systems, select a maximal
set of independent rows, derive the canonical frame (full-rank or
rank-deficient branch), build the parametrized solution set, check the
leftover rows for consistency, and finally restrict by the inequalities
``t_i >= b`` that distinguish the true positioning problem from its
squared relaxation.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .model import (
    FullRankFrame,
    LiftedSystem,
    ParamPoly,
    RankDeficientFrame,
    Scenario,
    SolutionSet,
    validate_scenario,
)
from .numerics import (
    Tolerance,
    orthonormal_complement,
    orthonormal_span,
    particular_solution,
    rank_with_tolerance,
)

__all__ = [
    "FrameError",
    "build_matrices",
    "compute_frame",
    "solve_squared",
    "residual_htilde",
    "residual_components",
    "filter_inequalities",
    "FeasibleSolutionSet",
    "two_satellite_closed_form",
    "TwoSatelliteSolution",
    "is_collinear_degenerate",
    "frame_constants",
    "finite_solutions",
    "sample_solutions",
    "SolveResult",
    "solve_scenario",
]


class FrameError(RuntimeError):
    """Internal tolerance failure while deriving the canonical frame."""


def build_matrices(sc: Scenario) -> LiftedSystem:
    """Assemble the lifted systems from a validated scenario.

    Row ``i`` of ``A`` is ``(-2 t_i, 2 s_i, -1)``; ``B`` is ``A`` without
    the first column; ``rhs_i = |s_i|^2 - t_i^2``.
    """
    S = sc.satellites
    t = sc.pseudoranges
    ones = np.ones((sc.m, 1))
    B = np.hstack([2.0 * S, -ones])
    A = np.hstack([(-2.0 * t)[:, None], B])
    rhs = np.einsum("ij,ij->i", S, S) - t * t
    return LiftedSystem(A=A, B=B, rhs=rhs)


def _independent_rows(A: np.ndarray, tol: Tolerance) -> list[int]:
    """First maximal set of linearly independent rows, in input order.

    Scanning in input order keeps the selection stable when consistent
    (linearly dependent) measurements are appended, so redundant
    emitters never perturb the derived frame.
    """
    target = rank_with_tolerance(A, tol)
    chosen: list[int] = []
    for i in range(A.shape[0]):
        if len(chosen) == target:
            break
        trial = chosen + [i]
        if rank_with_tolerance(A[trial], tol) == len(trial):
            chosen.append(i)
    return chosen


def _constrained_solve(B, rhs, W, gamma, targets, tol):
    """Solve ``B @ (p, q) = rhs`` with ``<p, w_j> = targets_j``.

    The kernel of ``B`` is spanned by the lifted transverse vectors
    ``(w_j, 2 gamma_j)``, so the constraint picks a unique solution.
    """
    z = particular_solution(B, rhs, tol)
    if z is None:
        raise FrameError("lifted linear system unexpectedly inconsistent")
    p, q = z[:-1], float(z[-1])
    if W.shape[0]:
        adjust = targets - W @ p
        p = p + adjust @ W
        q = q + 2.0 * float(adjust @ gamma)
    return p, q


def compute_frame(system: LiftedSystem, sc: Scenario):
    """Derive the canonical frame for a row-independent lifted system.

    Requires ``rank(A) = m`` (the caller selects such rows).  Branches on
    ``rank(B)``: equal to ``m`` gives the full-rank frame, ``m - 1`` the
    rank-deficient frame with its uniquely determined bias.
    """
    tol = sc.tol
    m = system.A.shape[0]
    if rank_with_tolerance(system.A, tol) != m:
        raise FrameError("frame computation requires independent lifted rows")
    rank_b = rank_with_tolerance(system.B, tol)
    if rank_b == m:
        return _full_rank_frame(system, sc)
    if rank_b == m - 1:
        return _rank_deficient_frame(system, sc)
    raise FrameError(
        f"rank(B) = {rank_b} is incompatible with rank(A) = {m}; "
        "inconsistent tolerance decisions"
    )


def _transverse_data(S: np.ndarray, n: int, expected_span: int, tol: Tolerance, scale: float):
    diffs = S[1:] - S[0]
    span = orthonormal_span(diffs, n, tol)
    if span.shape[0] != expected_span:
        raise FrameError(
            f"emitter span has dimension {span.shape[0]}, expected {expected_span}"
        )
    W = orthonormal_complement(diffs, n, tol)
    if W.shape[0] != n - expected_span:
        raise FrameError("kernel dimension disagrees with the rank decision")
    if W.shape[0]:
        coords = S @ W.T
        gamma = coords.mean(axis=0)
        if np.abs(coords - gamma).max() > 100.0 * tol.geom_abs * scale:
            raise FrameError("transverse emitter coordinates are not constant")
    else:
        gamma = np.zeros(0)
    return span, W, gamma


def _full_rank_frame(system: LiftedSystem, sc: Scenario) -> FullRankFrame:
    tol, scale, n = sc.tol, sc.scale, sc.n
    m = sc.m
    span, W, gamma = _transverse_data(sc.satellites, n, m - 1, tol, scale)
    v, beta = _constrained_solve(system.B, system.rhs, W, gamma, gamma, tol)
    u, two_alpha = _constrained_solve(
        system.B, 2.0 * sc.pseudoranges, W, gamma, np.zeros(W.shape[0]), tol
    )
    alpha = 0.5 * two_alpha
    time_residual = np.abs(sc.satellites @ u - alpha - sc.pseudoranges).max()
    if time_residual > 100.0 * tol.geom_abs * scale:
        raise FrameError("time map does not reproduce the pseudoranges")
    return FullRankFrame(
        bias_direction=u,
        time_offset=float(alpha),
        base_point=v,
        base_lift=beta,
        transverse_basis=W,
        transverse_offsets=gamma,
        span_basis=span,
        scale=scale,
        tol=tol,
    )


def _rank_deficient_frame(system: LiftedSystem, sc: Scenario) -> RankDeficientFrame:
    tol, scale, n = sc.tol, sc.scale, sc.n
    m = sc.m
    z = particular_solution(system.A, system.rhs, tol)
    if z is None:
        raise FrameError("lifted linear system unexpectedly inconsistent")
    b0 = float(z[0])
    span, W, gamma = _transverse_data(sc.satellites, n, m - 2, tol, scale)
    rhs2 = np.einsum("ij,ij->i", sc.satellites, sc.satellites) - (sc.pseudoranges - b0) ** 2
    v, beta = _constrained_solve(system.B, rhs2, W, gamma, gamma, tol)
    return RankDeficientFrame(
        fixed_bias=b0,
        base_point=v,
        base_lift=beta,
        transverse_basis=W,
        transverse_offsets=gamma,
        span_basis=span,
        scale=scale,
        tol=tol,
    )


def frame_constants(frame) -> dict:
    """Derived scalars of a frame used by counting and classification.

    For the full-rank branch the solution polynomial in the bias is
    ``c2 b^2 + c1 b + c0`` with ``c2 = e^2 - 1``; ``mu`` and ``level``
    complete the square (``center = base - mu * direction`` and the
    quadrics sit at level ``level``); ``vertex_coord`` and
    ``focus_coord`` are the parabolic-axis coordinates when ``e = 1``.
    """
    tol = frame.tol
    scale = frame.scale
    out: dict = {"scale": scale}
    if isinstance(frame, RankDeficientFrame):
        out.update(branch="rank_deficient", radius_sq=frame.radius_sq, e=None)
        return out
    u, v = frame.bias_direction, frame.base_point
    e = frame.bias_norm
    c2 = e * e - 1.0
    c1 = 2.0 * float(u @ v - frame.time_offset)
    c0 = float(v @ v - frame.base_lift)
    out.update(branch="full_rank", e=e, c2=c2, c1=c1, c0=c0)
    eps = tol.geom_abs
    if abs(c2) > eps:
        mu = 0.5 * c1 / c2
        out["mu"] = mu
        out["level"] = 0.25 * c1 * c1 / c2 - c0
    if abs(e - 1.0) <= eps and abs(c1) > eps * scale:
        lam1 = -c0 / c1
        out["vertex_coord"] = lam1
        out["focus_coord"] = lam1 - 0.25 * c1
    return out


def _poly_from_frame(frame) -> ParamPoly:
    if isinstance(frame, RankDeficientFrame):
        return ParamPoly(bias_sq=0.0, bias_lin=0.0, const=-frame.radius_sq, has_bias=False)
    c = frame_constants(frame)
    return ParamPoly(bias_sq=c["c2"], bias_lin=c["c1"], const=c["c0"])


def _count_solutions(frame, poly: ParamPoly) -> tuple[str, bool]:
    tol, scale = frame.tol, frame.scale
    eps = tol.geom_abs
    eps_lin = eps * scale
    eps_quad = eps * scale * scale

    if isinstance(frame, RankDeficientFrame):
        r2 = frame.radius_sq
        if frame.k == 0:
            return ("one", True) if abs(r2) <= eps_quad else ("zero", False)
        if r2 > eps_quad:
            return ("two", False) if frame.k == 1 else ("infinite", False)
        if r2 < -eps_quad:
            return "zero", False
        return "one", True

    e = frame.bias_norm
    c2, c1, c0 = poly.bias_sq, poly.bias_lin, poly.const
    line_degenerate = abs(c2) <= eps and abs(c1) <= eps_lin and abs(c0) <= eps_quad
    if line_degenerate:
        return "infinite", False
    if frame.k == 0:
        if abs(c2) <= eps:
            return ("zero", False) if abs(c1) <= eps_lin else ("one", False)
        disc = c1 * c1 - 4.0 * c2 * c0
        if disc > eps_quad:
            return "two", False
        if disc < -eps_quad:
            return "zero", False
        return "one", True
    if e <= eps:
        return "infinite", False
    if abs(e - 1.0) <= eps:
        if abs(c1) <= eps_lin:
            return ("zero", False) if c0 > 0.0 else ("infinite", False)
        return "infinite", False
    if e > 1.0:
        level = 0.25 * c1 * c1 / c2 - c0
        if level > eps_quad:
            return "infinite", False
        if level < -eps_quad:
            return "zero", False
        return "one", True
    return "infinite", False


def residual_components(frame, t: float, s) -> dict:
    """Individual consistency residuals of a (time, position) pair.

    ``htilde`` is the quadratic locus value; ``span`` the violation of
    the emitter affine span conditions; ``time`` the violation of the
    single-valued time map (full-rank branch only).
    """
    s = np.asarray(s, dtype=float)
    W = frame.transverse_basis
    span = float(np.abs(W @ s - frame.transverse_offsets).max()) if frame.k else 0.0
    v = frame.base_point
    if isinstance(frame, RankDeficientFrame):
        ht = (t - frame.fixed_bias) ** 2 - float(s @ s) + 2.0 * float(s @ v) \
            - frame.base_lift
        return {"htilde": float(ht), "span": span, "time": 0.0}
    u = frame.bias_direction
    alpha = frame.time_offset
    us = float(u @ s)
    ht = float(s @ s) - us * us + 2.0 * float((alpha * u - v) @ s) \
        + frame.base_lift - alpha * alpha
    time = abs(t - (us - alpha))
    return {"htilde": float(ht), "span": span, "time": time}


def residual_htilde(frame, t: float, s) -> float:
    """Combined locus residual, in squared length units.

    Zero (up to tolerance) exactly when ``(t, s)`` satisfies all frame
    equations: the quadratic locus value, the affine span conditions,
    and the time map.  First-order terms are scaled by the scenario
    magnitude so all parts are comparable.
    """
    parts = residual_components(frame, t, s)
    return max(
        abs(parts["htilde"]),
        parts["span"] * frame.scale,
        parts["time"] * frame.scale,
    )


def solve_squared(sc: Scenario) -> SolutionSet:
    """Full solution set of the squared positioning equations.

    Selects independent lifted rows, computes the frame on them, and
    tests every leftover measurement against the frame equations; any
    violation empties the set.  Works for every ``m >= 1``.
    """
    sc = validate_scenario(sc)
    system = build_matrices(sc)
    chosen = _independent_rows(system.A, sc.tol)
    sub = sc.subset(chosen)
    frame = compute_frame(build_matrices(sub), sub)
    poly = _poly_from_frame(frame)
    count, near = _count_solutions(frame, poly)
    sol = SolutionSet(frame=frame, poly=poly, count_hint=count, near_degenerate=near)

    threshold = sc.tol.geom_abs * sc.scale * sc.scale
    chosen_set = set(chosen)
    for i in range(sc.m):
        if i in chosen_set:
            continue
        if residual_htilde(frame, float(sc.pseudoranges[i]), sc.satellites[i]) > threshold:
            return SolutionSet(
                frame=frame,
                poly=poly,
                count_hint="zero",
                near_degenerate=near,
                inconsistent_row=i,
            )
    return sol


def finite_solutions(sol: SolutionSet) -> list[tuple[float, np.ndarray]]:
    """Enumerate the solutions of a finite solution set.

    Raises for infinite sets; returns an empty list for empty ones.
    """
    if sol.count_hint == "infinite":
        raise ValueError("solution set is infinite; use sample_solutions instead")
    if sol.is_empty:
        return []
    frame = sol.frame
    if isinstance(frame, RankDeficientFrame):
        if sol.count_hint == "two":
            step = math.sqrt(frame.radius_sq) * frame.transverse_basis[0]
            return [
                (frame.fixed_bias, frame.base_point + step),
                (frame.fixed_bias, frame.base_point - step),
            ]
        return [(frame.fixed_bias, frame.base_point.copy())]
    c = frame_constants(frame)
    u, v = frame.bias_direction, frame.base_point
    if frame.k == 0:
        roots = _quadratic_roots(
            c["c2"], c["c1"], c["c0"], frame.tol.geom_abs, frame.tol.geom_abs * frame.scale**2
        )
        return [(b, v + b * u) for b in roots]
    b = -c["mu"]
    return [(b, v + b * u)]


def _quadratic_roots(a: float, b: float, c: float, eps_a: float, eps_disc: float) -> list[float]:
    if abs(a) <= eps_a:
        if b == 0.0:
            return []
        return [-c / b]
    disc = b * b - 4.0 * a * c
    if disc < -eps_disc:
        return []
    if disc <= eps_disc:
        return [-b / (2.0 * a)]
    sq = math.sqrt(disc)
    q = -0.5 * (b + math.copysign(sq, b))
    return sorted([q / a, c / q])


def sample_solutions(sol: SolutionSet, count: int, seed: int) -> list[tuple[float, np.ndarray]]:
    """Deterministic points of the solution set, exact up to rounding.

    Finite sets are cycled.  For unbounded families the free parameters
    are drawn from a window of three semiaxes around the natural center
    (three units when no scale is defined).
    """
    if sol.is_empty:
        raise ValueError("cannot sample an empty solution set")
    if sol.count_hint in ("one", "two"):
        pts = finite_solutions(sol)
        return [pts[i % len(pts)] for i in range(count)]

    rng = np.random.default_rng(seed)
    frame = sol.frame
    k = frame.k
    out: list[tuple[float, np.ndarray]] = []

    if isinstance(frame, RankDeficientFrame):
        radius = math.sqrt(max(frame.radius_sq, 0.0))
        for _ in range(count):
            y = _unit(rng, k) * radius
            out.append(sol.embed(frame.fixed_bias, y))
        return out

    c = frame_constants(frame)
    e, c1, c0 = c["e"], c["c1"], c["c0"]
    eps = frame.tol.geom_abs

    if e <= eps:
        alpha = frame.time_offset
        r2 = max(c0 + alpha * alpha, 0.0)
        window = 3.0 * max(math.sqrt(r2), 1.0)
        for i in range(count):
            y = rng.uniform(-window, window, size=k)
            b = -alpha + (-1.0 if i % 2 == 0 else 1.0) * math.sqrt(r2 + float(y @ y))
            out.append(sol.embed(b, y))
        return out

    if abs(c.get("c2", 0.0)) <= eps and abs(c1) <= eps * frame.scale:
        if abs(c0) <= eps * frame.scale**2:
            for _ in range(count):  # solutions form a line in the bias
                b = rng.uniform(-3.0, 3.0)
                out.append(sol.embed(b, np.zeros(k)))
            return out
        radius = math.sqrt(max(-c0, 0.0))
        window = 3.0 * max(radius, 1.0)
        for _ in range(count):
            y = _unit(rng, k) * radius
            out.append(sol.embed(rng.uniform(-window, window), y))
        return out

    if abs(e - 1.0) <= eps:
        lam1 = c["vertex_coord"]
        window = 3.0 * max(abs(c1) / 2.0, 1.0)
        for _ in range(count):
            y = rng.uniform(-window, window, size=k)
            out.append(sol.embed(lam1 - float(y @ y) / c1, y))
        return out

    c2, mu, level = c["c2"], c["mu"], c["level"]
    if e > 1.0:
        # ellipsoid in the parameters: c2 (b + mu)^2 + |y|^2 = level
        for _ in range(count):
            z = _unit(rng, k + 1)
            b = -mu + math.sqrt(max(level, 0.0) / c2) * z[0]
            y = math.sqrt(max(level, 0.0)) * z[1:]
            out.append(sol.embed(b, y))
        return out

    # 0 < e < 1: |y|^2 = level + (1 - e^2) (b + mu)^2 over two branches
    shrink = 1.0 - e * e
    if level <= 0.0:
        semi = e * math.sqrt(-level / shrink) if level < 0.0 else 0.0
        window = 3.0 * max(semi, 1.0)
        for i in range(count):
            y = rng.uniform(-window, window, size=k)
            offset = math.sqrt((float(y @ y) - level) / shrink)
            b = -mu + (offset if i % 2 == 0 else -offset)
            out.append(sol.embed(b, y))
        return out
    reach = math.sqrt(level / shrink)
    for _ in range(count):
        b = -mu + rng.uniform(-reach, reach)
        rad = math.sqrt(max(level - shrink * (b + mu) ** 2, 0.0))
        out.append(sol.embed(b, _unit(rng, k) * rad))
    return out


def _unit(rng: np.random.Generator, dim: int) -> np.ndarray:
    if dim == 0:
        return np.zeros(0)
    vec = rng.standard_normal(dim)
    norm = np.linalg.norm(vec)
    while norm < 1e-12:
        vec = rng.standard_normal(dim)
        norm = np.linalg.norm(vec)
    return vec / norm


@dataclass(frozen=True, eq=False)
class TwoSatelliteSolution:
    """Closed form for two emitters, used as an independent oracle."""

    bias_direction: np.ndarray
    solutions: tuple[tuple[float, np.ndarray], tuple[float, np.ndarray]]


def two_satellite_closed_form(s1, t1: float, s2, t2: float) -> TwoSatelliteSolution:
    """Two explicit solutions of the squared equations for two emitters.

    With ``d = |s1 - s2|`` the bias direction is
    ``(t1 - t2) / d^2 * (s1 - s2)`` and the solutions are
    ``x = (s1 + s2 +- d u) / 2`` with ``b = (t1 + t2 +- d) / 2``.
    """
    s1 = np.asarray(s1, dtype=float)
    s2 = np.asarray(s2, dtype=float)
    diff = s1 - s2
    d = float(np.linalg.norm(diff))
    if d == 0.0:
        raise ValueError("the two emitters must be distinct")
    u = (t1 - t2) / (d * d) * diff
    mid = 0.5 * (s1 + s2)
    plus = (0.5 * (t1 + t2 + d), mid + 0.5 * d * u)
    minus = (0.5 * (t1 + t2 - d), mid - 0.5 * d * u)
    return TwoSatelliteSolution(bias_direction=u, solutions=(plus, minus))


def is_collinear_degenerate(sc: Scenario, frame) -> bool:
    """True when the solution set degenerates to a line in (bias, position).

    Happens exactly for two emitters whose pseudorange gap equals their
    distance; equivalently all bias coefficients of the solution
    polynomial vanish.
    """
    if isinstance(frame, RankDeficientFrame):
        return False
    tol, scale = frame.tol, frame.scale
    c = frame_constants(frame)
    return (
        abs(c["c2"]) <= tol.geom_abs
        and abs(c["c1"]) <= tol.geom_abs * scale
        and abs(c["c0"]) <= tol.geom_abs * scale * scale
    )


@dataclass(frozen=True, eq=False)
class FeasibleSolutionSet:
    """Solutions of the squared equations that satisfy ``t_i >= b``.

    ``rule`` names the sign decision used:

    * ``"empty_squared"``: nothing to restrict;
    * ``"rank_deficient_sign"``: the fixed bias makes feasibility a
      property of the data alone (all or nothing);
    * ``"bias_upper_bound"``: feasible iff ``b <= bias_bound`` (the
      equal-pseudoranges and degenerate line cases);
    * ``"parabolic_all_or_none"``: all or nothing by the opening
      direction of the emitter paraboloid;
    * ``"all_on_positive_sheet"``: all or nothing by the emitters lying
      on the positive sheet of their hyperboloid;
    * ``"solution_sheet_minus"``: per-point test, feasible iff the
      position lies on the negative-sheet side of the solution
      hyperboloid;
    * ``"explicit_points"``: finite set, each solution tested directly.
    """

    squared: SolutionSet
    scenario: Scenario
    rule: str
    solvable: bool
    feasible_count: str
    bias_bound: float | None = None
    center: np.ndarray | None = None
    direction: np.ndarray | None = None
    points: tuple[tuple[float, np.ndarray], ...] = ()

    def is_feasible(self, b: float, x) -> bool:
        """Apply this set's sign decision to a solution of the squared system."""
        tol = self.scenario.tol.geom_abs * self.scenario.scale
        if self.rule == "empty_squared":
            return False
        if self.rule in ("rank_deficient_sign", "parabolic_all_or_none", "all_on_positive_sheet"):
            return self.solvable
        if self.rule == "bias_upper_bound":
            return b <= self.bias_bound + tol
        if self.rule == "solution_sheet_minus":
            return float(self.direction @ (np.asarray(x, dtype=float) - self.center)) <= tol
        # explicit finite set: test the inequalities directly
        t = self.scenario.pseudoranges
        return bool(np.min(t - b) >= -tol)

    def sample(self, count: int, seed: int) -> list[tuple[float, np.ndarray]]:
        """Feasible points, drawn from the squared set and filtered."""
        if self.feasible_count == "zero":
            raise ValueError("feasible set is empty")
        if self.rule == "explicit_points":
            return [self.points[i % len(self.points)] for i in range(count)]
        out: list[tuple[float, np.ndarray]] = []
        attempt = 0
        while len(out) < count and attempt < 64:
            for b, x in sample_solutions(self.squared, count * 2, seed + attempt):
                if self.is_feasible(b, x):
                    out.append((b, x))
                    if len(out) == count:
                        break
            attempt += 1
        if len(out) < count:
            raise RuntimeError("could not draw enough feasible samples")
        return out


def filter_inequalities(sol: SolutionSet, frame, sc: Scenario) -> FeasibleSolutionSet:
    """Restrict a squared solution set by the inequalities ``t_i >= b``.

    The decision is geometric, not a per-equation search: depending on
    the frame it is a fixed-bias sign test, a bias upper bound, an
    all-or-nothing condition on the emitters, or a sheet selection on
    the solution quadric.
    """
    tol = sc.tol
    scale = sc.scale
    t = sc.pseudoranges

    def build(rule, solvable, count, **extra):
        return FeasibleSolutionSet(
            squared=sol, scenario=sc, rule=rule, solvable=solvable,
            feasible_count=count, **extra,
        )

    if sol.is_empty:
        return build("empty_squared", False, "zero")

    if isinstance(frame, RankDeficientFrame):
        ok = bool(np.min(t - frame.fixed_bias) >= -tol.geom_abs * scale)
        return build("rank_deficient_sign", ok, sol.count_hint if ok else "zero")

    c = frame_constants(frame)
    e = c["e"]
    eps = tol.geom_abs

    if e <= eps:
        bound = -frame.time_offset
        count = _bounded_count(sol, bound)
        return build("bias_upper_bound", True, count, bias_bound=bound)

    if is_collinear_degenerate(sc, frame):
        bound = float(np.min(t))
        return build("bias_upper_bound", True, "infinite", bias_bound=bound)

    if abs(e - 1.0) <= eps:
        if abs(c["c1"]) <= eps * scale and c["c0"] < 0.0:
            # cylinder of squared solutions: the bias is a free parameter
            return build(
                "bias_upper_bound", True, "infinite", bias_bound=float(np.min(t))
            )
        ok = c["c1"] > 0.0
        return build("parabolic_all_or_none", ok, sol.count_hint if ok else "zero")

    if sol.count_hint == "one":
        pts = finite_solutions(sol)
        feas = tuple(
            (b, x) for b, x in pts if np.min(t - b) >= -eps * scale
        )
        return build(
            "explicit_points", bool(feas), "one" if feas else "zero", points=feas
        )

    center = frame.base_point - c["mu"] * frame.bias_direction
    if e > 1.0:
        gaps = (sc.satellites - center) @ frame.bias_direction
        ok = bool(np.min(gaps) >= -eps * scale)
        return build(
            "all_on_positive_sheet", ok, sol.count_hint if ok else "zero",
            center=center, direction=frame.bias_direction,
        )

    count = "one" if sol.count_hint == "two" else sol.count_hint
    return build(
        "solution_sheet_minus", True, count,
        center=center, direction=frame.bias_direction,
    )


def _bounded_count(sol: SolutionSet, bound: float) -> str:
    if sol.count_hint == "infinite":
        return "infinite"
    pts = finite_solutions(sol)
    kept = sum(1 for b, _ in pts if b <= bound + sol.frame.tol.geom_abs * sol.frame.scale)
    return {0: "zero", 1: "one", 2: "two"}[kept]


@dataclass(frozen=True, eq=False)
class SolveResult:
    """Everything the pipeline derives from one scenario."""

    scenario: Scenario
    system: LiftedSystem
    selected_rows: tuple[int, ...]
    frame: FullRankFrame | RankDeficientFrame
    solution_set: SolutionSet
    feasible: FeasibleSolutionSet


def solve_scenario(sc: Scenario) -> SolveResult:
    """Run the complete pipeline: validate, solve, filter inequalities."""
    sc = validate_scenario(sc)
    system = build_matrices(sc)
    chosen = _independent_rows(system.A, sc.tol)
    sol = solve_squared(sc)
    feas = filter_inequalities(sol, sol.frame, sc)
    return SolveResult(
        scenario=sc,
        system=system,
        selected_rows=tuple(chosen),
        frame=sol.frame,
        solution_set=sol,
        feasible=feas,
    )

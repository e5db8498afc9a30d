"""Domain types shared by all modules.

A :class:`Scenario` is the problem instance (emitter positions plus
pseudoranges).  From it the solver derives a :class:`FullRankFrame` or
:class:`RankDeficientFrame`, the canonical geometric data on which every
closed-form expression of the package is evaluated, and a
:class:`SolutionSet` describing all pairs ``(bias, position)`` that solve
the squared positioning equations ``|s_i - x|^2 = (t_i - b)^2``.

Classified geometry is reported through :class:`QuadricDescriptor` and
:class:`SatelliteLocus`.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, replace

import numpy as np

from .numerics import DEFAULT_TOLERANCE, Tolerance

__all__ = [
    "Scenario",
    "LiftedSystem",
    "FullRankFrame",
    "RankDeficientFrame",
    "Frame",
    "ParamPoly",
    "SolutionSet",
    "QuadricKind",
    "QuadricDescriptor",
    "SatelliteLocus",
    "ScenarioError",
    "validate_scenario",
]


class ScenarioError(ValueError):
    """Raised for dimensionally inconsistent or non-finite input data."""


@dataclass(frozen=True, eq=False)
class Scenario:
    """A multilateration problem instance.

    Attributes
    ----------
    n : ambient dimension (>= 1).
    satellites : (m, n) array of emitter positions.
    pseudoranges : (m,) array of measured ranges offset by a common
        unknown clock bias (same units as positions).
    tol : numerical cutoffs used throughout the pipeline.
    unit : optional label for the position unit (informational).
    notes : validation remarks, e.g. duplicate-emitter redundancy.
    """

    n: int
    satellites: np.ndarray
    pseudoranges: np.ndarray
    tol: Tolerance = DEFAULT_TOLERANCE
    unit: str = ""
    notes: tuple[str, ...] = ()

    def __post_init__(self) -> None:
        object.__setattr__(self, "satellites", np.atleast_2d(np.asarray(self.satellites, dtype=float)))
        object.__setattr__(self, "pseudoranges", np.atleast_1d(np.asarray(self.pseudoranges, dtype=float)))

    @property
    def m(self) -> int:
        return self.satellites.shape[0]

    @property
    def scale(self) -> float:
        """Characteristic magnitude used for relative residual bounds."""
        return max(
            1.0,
            float(np.abs(self.satellites).max(initial=0.0)),
            float(np.abs(self.pseudoranges).max(initial=0.0)),
        )

    def subset(self, rows) -> "Scenario":
        """Scenario restricted to the given emitter indices, in order."""
        idx = list(rows)
        return replace(
            self,
            satellites=self.satellites[idx],
            pseudoranges=self.pseudoranges[idx],
            notes=(),
        )


def validate_scenario(sc: Scenario) -> Scenario:
    """Check finiteness and dimensional consistency.

    Returns the scenario unchanged except for redundancy notes: exact
    duplicate (position, pseudorange) pairs are accepted but reported,
    since they add no information.
    """
    if sc.m == 0:
        raise ScenarioError("a scenario needs at least one emitter")
    if sc.n < 1:
        raise ScenarioError(f"ambient dimension must be >= 1, got {sc.n}")
    if sc.satellites.ndim != 2 or sc.satellites.shape[1] != sc.n:
        raise ScenarioError(
            f"emitter positions must be (m, {sc.n}), got {sc.satellites.shape}"
        )
    if sc.pseudoranges.shape != (sc.m,):
        raise ScenarioError(
            f"expected {sc.m} pseudoranges, got shape {sc.pseudoranges.shape}"
        )
    if not np.all(np.isfinite(sc.satellites)) or not np.all(np.isfinite(sc.pseudoranges)):
        raise ScenarioError("positions and pseudoranges must be finite")

    notes = list(sc.notes)
    seen: dict[tuple, int] = {}
    for i in range(sc.m):
        key = (tuple(sc.satellites[i]), float(sc.pseudoranges[i]))
        if key in seen:
            notes.append(
                f"emitter {i} duplicates emitter {seen[key]} (redundant measurement)"
            )
        else:
            seen[key] = i
    return replace(sc, notes=tuple(notes))


@dataclass(frozen=True, eq=False)
class LiftedSystem:
    """The linear systems obtained by squaring the positioning equations.

    ``A`` has rows ``(-2 t_i, 2 s_i, -1)``; ``B`` drops the bias column,
    rows ``(2 s_i, -1)``; ``rhs`` holds ``|s_i|^2 - t_i^2``.  Entries are
    exact arithmetic on the inputs.
    """

    A: np.ndarray
    B: np.ndarray
    rhs: np.ndarray


@dataclass(frozen=True, eq=False)
class FullRankFrame:
    """Canonical frame when the emitters are affinely independent.

    The solution set is ``x = base_point + b * bias_direction + y @
    transverse_basis`` over parameters ``(b, y)`` constrained by a
    quadratic polynomial.  Normalizations making the frame unique:
    ``bias_direction`` is orthogonal to every transverse vector and the
    base point has transverse coordinates ``transverse_offsets``.

    ``bias_direction`` also defines the emitter time map
    ``t(s) = <bias_direction, s> - time_offset``, satisfied by every
    emitter of the scenario.
    """

    bias_direction: np.ndarray
    time_offset: float
    base_point: np.ndarray
    base_lift: float
    transverse_basis: np.ndarray
    transverse_offsets: np.ndarray
    span_basis: np.ndarray
    scale: float
    tol: Tolerance

    @property
    def n(self) -> int:
        return self.base_point.size

    @property
    def k(self) -> int:
        return self.transverse_basis.shape[0]

    @property
    def bias_norm(self) -> float:
        """Norm of the bias direction; drives the quadric classification."""
        return float(np.linalg.norm(self.bias_direction))


@dataclass(frozen=True, eq=False)
class RankDeficientFrame:
    """Frame for affinely dependent emitters with independent lifted rows.

    Here the clock bias is uniquely determined (``fixed_bias``) and the
    solution set is a sphere ``|y|^2 = base_lift - |base_point|^2`` in
    ``base_point + span(transverse_basis)``.
    """

    fixed_bias: float
    base_point: np.ndarray
    base_lift: float
    transverse_basis: np.ndarray
    transverse_offsets: np.ndarray
    span_basis: np.ndarray
    scale: float
    tol: Tolerance

    @property
    def n(self) -> int:
        return self.base_point.size

    @property
    def k(self) -> int:
        return self.transverse_basis.shape[0]

    @property
    def radius_sq(self) -> float:
        """Squared sphere radius of the solution set (may be negative)."""
        return float(self.base_lift - self.base_point @ self.base_point)


Frame = FullRankFrame | RankDeficientFrame


@dataclass(frozen=True, eq=False)
class ParamPoly:
    """Quadratic constraint on the solution parameters.

    Evaluates ``sum(y_j^2) + bias_sq * b^2 + bias_lin * b + const``.
    When ``has_bias`` is false the bias is fixed and only the ``y`` part
    applies.
    """

    bias_sq: float
    bias_lin: float
    const: float
    has_bias: bool = True

    def __call__(self, b: float, y) -> float:
        y = np.atleast_1d(np.asarray(y, dtype=float))
        value = float(y @ y) + self.const
        if self.has_bias:
            value += self.bias_sq * b * b + self.bias_lin * b
        return value


@dataclass(frozen=True, eq=False)
class SolutionSet:
    """All solutions of the squared positioning equations.

    ``count_hint`` is one of ``"zero"``, ``"one"``, ``"two"``,
    ``"infinite"``.  Every point produced by :meth:`embed` satisfies the
    squared equations of the generating scenario to tolerance.
    """

    frame: Frame
    poly: ParamPoly
    count_hint: str
    near_degenerate: bool = False
    inconsistent_row: int | None = None

    @property
    def kind(self) -> str:
        return "empty" if self.count_hint == "zero" else "parametrized"

    @property
    def is_empty(self) -> bool:
        return self.count_hint == "zero"

    @property
    def origin_bias(self) -> float:
        frame = self.frame
        return frame.fixed_bias if isinstance(frame, RankDeficientFrame) else 0.0

    @property
    def bias_direction(self) -> np.ndarray | None:
        frame = self.frame
        return frame.bias_direction if isinstance(frame, FullRankFrame) else None

    @property
    def basis(self) -> np.ndarray:
        return self.frame.transverse_basis

    def embed(self, b: float, y) -> tuple[float, np.ndarray]:
        """Map parameters to a (bias, position) pair."""
        frame = self.frame
        y = np.atleast_1d(np.asarray(y, dtype=float))
        x = frame.base_point + (y @ frame.transverse_basis if frame.k else 0.0)
        if isinstance(frame, FullRankFrame):
            return float(b), x + b * frame.bias_direction
        return frame.fixed_bias, x

    def parameters_of(self, b: float, x) -> tuple[float, np.ndarray]:
        """Transverse coordinates of a candidate point in this frame."""
        frame = self.frame
        x = np.asarray(x, dtype=float)
        rel = x - frame.base_point
        if isinstance(frame, FullRankFrame):
            rel = rel - b * frame.bias_direction
        y = frame.transverse_basis @ rel if frame.k else np.zeros(0)
        return float(b), y

    def membership_residual(self, b: float, x) -> float:
        """Deviation of ``(b, x)`` from the set, in squared length units.

        Combines the distance from ``x`` to the affine parametrization
        (scaled by the scenario magnitude) with the value of the
        quadratic constraint; both vanish exactly on the set.
        """
        if self.is_empty:
            return float("inf")
        frame = self.frame
        b_val, y = self.parameters_of(b, x)
        _, recon = self.embed(b_val, y)
        off_span = float(np.linalg.norm(np.asarray(x, dtype=float) - recon))
        residual = off_span * frame.scale + abs(self.poly(b_val, y))
        if isinstance(frame, RankDeficientFrame):
            residual = max(residual, abs(b - frame.fixed_bias) * frame.scale)
        return residual


class QuadricKind(str, enum.Enum):
    """Taxonomy of the quadrics arising from the positioning problem."""

    PROLATE_SPHEROID = "prolate_spheroid"
    HYPERBOLOID_TWO_SHEETS = "hyperboloid_two_sheets"
    PARABOLOID = "paraboloid_of_revolution"
    SPHERE = "sphere"
    AFFINE_SUBSPACE = "affine_subspace"
    LINE = "line"
    PAIR_OF_POINTS = "pair_of_points"
    SINGLE_POINT = "single_point"
    EMPTY = "empty"
    FULL_SPACE = "full_space"
    HYPERBOLOID_ONE_SHEET = "hyperboloid_one_sheet"
    CONE = "cone"
    CYLINDER = "cylinder"


@dataclass(frozen=True, eq=False)
class QuadricDescriptor:
    """A classified quadric with its geometric parameters.

    ``ambient_basis`` spans the directions of the quadric's affine hull
    (orthonormal rows).  When an axis of symmetry exists, row 0 of
    ``ambient_basis`` is the unit axis direction; for paraboloids the
    axis direction points from the vertex toward the opening.  Fields
    that a kind does not define are ``None`` (or empty tuples).

    Affine subspaces are reported with the ``eccentricity_infinite``
    flag instead of a numeric eccentricity.
    """

    kind: QuadricKind
    ambient_base: np.ndarray
    ambient_basis: np.ndarray
    axis_point: np.ndarray | None = None
    axis_direction: np.ndarray | None = None
    center: np.ndarray | None = None
    vertices: tuple[np.ndarray, ...] = ()
    foci: tuple[np.ndarray, ...] = ()
    semiaxis_major: float | None = None
    semiaxis_minor: float | None = None
    eccentricity: float | None = None
    eccentricity_infinite: bool = False
    semilatus_rectum: float | None = None
    near_parabolic: bool = False

    @property
    def dim(self) -> int:
        """Dimension of the affine hull the quadric lives in."""
        return self.ambient_basis.shape[0]


@dataclass(frozen=True, eq=False)
class SatelliteLocus:
    """Locus of (time, position) pairs consistent with every solution.

    ``complete`` is true when the descriptor characterizes the full
    locus (the solution set has more than one element).  Otherwise the
    descriptor covers only the part cut out by the frame equations and
    membership is decided by ``map_kind``:

    * ``"affine"``: single-valued time map ``t = <u, s> - offset``;
    * ``"two_valued"``: ``(t - fixed_bias)^2 = |s - center|^2 + radius_sq``;
    * ``"cone"``: single squared solution ``(anchor_bias, anchor_point)``,
      membership means ``t = anchor_bias +- |s - anchor_point|``;
    * ``"unconstrained"``: empty solution set, every pair belongs.
    """

    descriptor: QuadricDescriptor
    complete: bool
    map_kind: str
    map_direction: np.ndarray | None = None
    map_offset: float | None = None
    fixed_bias: float | None = None
    center: np.ndarray | None = None
    radius_sq: float | None = None
    anchor_bias: float | None = None
    anchor_point: np.ndarray | None = None

    def times_for(self, s) -> tuple[float, ...]:
        """Locus time value(s) for a position, where defined."""
        s = np.asarray(s, dtype=float)
        if self.map_kind == "affine":
            return (float(self.map_direction @ s - self.map_offset),)
        if self.map_kind == "two_valued":
            rad = float(np.linalg.norm(s - self.center) ** 2 + self.radius_sq)
            if rad < 0.0:
                return ()
            root = float(np.sqrt(rad))
            return (self.fixed_bias - root, self.fixed_bias + root)
        if self.map_kind == "cone":
            d = float(np.linalg.norm(s - self.anchor_point))
            return (self.anchor_bias - d, self.anchor_bias + d)
        raise ValueError("time map is unconstrained: every (t, s) belongs")

    def exact_membership_residual(self, t: float, s) -> float:
        """Deviation of ``(t, s)`` from the exact locus, where known.

        Valid for ``map_kind`` ``"cone"`` and ``"unconstrained"``, and for
        complete descriptors through the solver's residual function; for
        the cone case this is the membership test the frame equations
        cannot express.
        """
        if self.map_kind == "unconstrained":
            return 0.0
        if self.map_kind == "cone":
            return abs(abs(t - self.anchor_bias) - float(np.linalg.norm(np.asarray(s, dtype=float) - self.anchor_point)))
        raise ValueError("exact residual only defined for cone or unconstrained loci")

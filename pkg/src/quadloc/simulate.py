"""Noise experiments: pseudorange synthesis, grid search, error statistics.

Reconstruction works on a grid over a search plane.  For a trial
position ``p`` the residuals ``r_i = |s_i - p| - t_i`` are reduced by
their mean (the best common-bias estimate), leaving the cost
``E(p) = sum_i (r_i - mean(r))^2`` which vanishes at the true position
for noiseless data and is invariant under a common shift of all
measured times.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .constraints import AffineConstraint

__all__ = [
    "NoiseModel",
    "SearchRegion",
    "CostSurface",
    "ErrorStats",
    "default_region",
    "synthesize_pseudoranges",
    "cost_surface",
    "grid_locate",
    "run_trials",
    "surface_rows",
]


@dataclass(frozen=True)
class NoiseModel:
    """Additive Gaussian noise on each time of arrival."""

    sigma: float
    seed: int = 0

    def __post_init__(self) -> None:
        if self.sigma < 0.0:
            raise ValueError("sigma must be nonnegative")


@dataclass(frozen=True, eq=False)
class SearchRegion:
    """A parameter box on a search plane.

    Grid node ``(i_1, ..., i_d)`` maps to
    ``constraint.base + sum_l coord_l(i_l) * constraint.basis[l]`` with
    ``coord_l`` linearly spaced from ``lower[l]`` to ``upper[l]`` over
    ``resolution[l]`` points.
    """

    constraint: AffineConstraint
    lower: np.ndarray
    upper: np.ndarray
    resolution: tuple[int, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "lower", np.asarray(self.lower, dtype=float))
        object.__setattr__(self, "upper", np.asarray(self.upper, dtype=float))
        object.__setattr__(self, "resolution", tuple(int(r) for r in self.resolution))
        d = self.constraint.dim
        if self.lower.shape != (d,) or self.upper.shape != (d,):
            raise ValueError("lower/upper must match the constraint dimension")
        if not np.all(self.lower < self.upper):
            raise ValueError("lower must be componentwise below upper")
        if len(self.resolution) != d or any(r < 2 for r in self.resolution):
            raise ValueError("need at least 2 grid points per axis")

    @property
    def axes(self) -> list[np.ndarray]:
        return [
            np.linspace(self.lower[l], self.upper[l], self.resolution[l])
            for l in range(self.constraint.dim)
        ]

    def grid_points(self) -> np.ndarray:
        """All grid nodes as ambient points, row-major, one per row."""
        mesh = np.meshgrid(*self.axes, indexing="ij")
        coords = np.stack([m.ravel() for m in mesh], axis=1)
        return self.constraint.base + coords @ self.constraint.basis


@dataclass(frozen=True, eq=False)
class CostSurface:
    """Reconstruction cost over a search grid, with its minimizer."""

    region: SearchRegion
    values: np.ndarray
    argmin_index: tuple[int, ...]
    argmin_point: np.ndarray

    @property
    def min_value(self) -> float:
        return float(self.values[self.argmin_index])


@dataclass(frozen=True)
class ErrorStats:
    """Monte-Carlo position error summary (in position units)."""

    trials: int
    mean_error: float
    std_error: float


def default_region(
    x_true,
    constraint: AffineConstraint,
    half_extent: float = 2.0,
    resolution: int = 401,
) -> SearchRegion:
    """Search box of ``x_true`` plus/minus ``half_extent`` per plane axis.

    The default 401-point axes put the true position exactly on the
    grid, so the zero-noise experiment recovers it exactly.
    """
    center = constraint.basis @ (np.asarray(x_true, dtype=float) - constraint.base)
    return SearchRegion(
        constraint=constraint,
        lower=center - half_extent,
        upper=center + half_extent,
        resolution=(resolution,) * constraint.dim,
    )


def synthesize_pseudoranges(positions, x_true, b_true: float, noise: NoiseModel) -> np.ndarray:
    """Times of arrival ``|s_i - x| + b`` with seeded Gaussian noise."""
    positions = np.atleast_2d(np.asarray(positions, dtype=float))
    x_true = np.asarray(x_true, dtype=float)
    clean = np.linalg.norm(positions - x_true, axis=1) + b_true
    if noise.sigma == 0.0:
        return clean
    rng = np.random.default_rng(noise.seed)
    return clean + rng.normal(0.0, noise.sigma, size=clean.size)


def _distance_table(positions: np.ndarray, grid: np.ndarray) -> np.ndarray:
    return np.linalg.norm(grid[None, :, :] - positions[:, None, :], axis=2)


def _cost_from_distances(dist: np.ndarray, t_tilde: np.ndarray) -> np.ndarray:
    residuals = dist - np.asarray(t_tilde, dtype=float)[:, None]
    centered = residuals - residuals.mean(axis=0)
    return np.einsum("ij,ij->j", centered, centered)


def cost_surface(positions, t_tilde, region: SearchRegion) -> CostSurface:
    """Cost of every grid node, with argmin (ties break at the lowest index)."""
    positions = np.atleast_2d(np.asarray(positions, dtype=float))
    grid = region.grid_points()
    flat = _cost_from_distances(_distance_table(positions, grid), t_tilde)
    values = flat.reshape(region.resolution)
    best = int(np.argmin(flat))
    index = np.unravel_index(best, region.resolution)
    return CostSurface(
        region=region,
        values=values,
        argmin_index=tuple(int(i) for i in index),
        argmin_point=grid[best],
    )


def grid_locate(surface: CostSurface) -> np.ndarray:
    """Position estimate: the grid node minimizing the cost."""
    return surface.argmin_point


def run_trials(
    receivers,
    x_true,
    b_true: float,
    noise: NoiseModel,
    region: SearchRegion,
    n_trials: int,
) -> ErrorStats:
    """Monte-Carlo localization error over independently seeded trials.

    Each trial draws fresh noise from a generator seeded by the pair
    (base seed, trial index), so results do not depend on execution
    order and rerunning any prefix reproduces the same numbers.
    """
    if n_trials < 1:
        raise ValueError("need at least one trial")
    receivers = np.atleast_2d(np.asarray(receivers, dtype=float))
    x_true = np.asarray(x_true, dtype=float)
    grid = region.grid_points()
    dist = _distance_table(receivers, grid)
    clean = np.linalg.norm(receivers - x_true, axis=1) + b_true
    errors = np.empty(n_trials)
    for trial in range(n_trials):
        rng = np.random.default_rng([noise.seed, trial])
        t_tilde = clean + rng.normal(0.0, noise.sigma, size=clean.size) \
            if noise.sigma > 0.0 else clean
        flat = _cost_from_distances(dist, t_tilde)
        errors[trial] = np.linalg.norm(grid[int(np.argmin(flat))] - x_true)
    return ErrorStats(
        trials=n_trials,
        mean_error=float(errors.mean()),
        std_error=float(errors.std()),
    )


def surface_rows(surface: CostSurface):
    """Yield CSV rows ``(x, y, E)`` for a two-axis surface, row-major."""
    if surface.region.constraint.dim != 2:
        raise ValueError("CSV export requires a two-axis search region")
    xs, ys = surface.region.axes
    for i, x in enumerate(xs):
        for j, y in enumerate(ys):
            yield float(x), float(y), float(surface.values[i, j])

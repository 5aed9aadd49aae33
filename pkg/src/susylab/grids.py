"""Uniform 1D grids and discrete calculus (differentiation, integration, norms).

Everything here is pure: sampled functions are immutable after construction
and every operation returns a fresh object.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import DegenerateInputError, DomainError

FULL_LINE = "full_line"
HALF_LINE = "half_line"

# Relative amplitude below which a sample does not participate in the
# sign convention of normalize().
_SIGN_FLOOR = 1e-8


@dataclass(frozen=True)
class Grid:
    """Uniform grid on [x_min, x_max] with n_points samples.

    half_line grids must satisfy x_min > 0; the origin itself is never a
    grid point (radial potentials carry a 1/r^2 singularity there).
    """

    domain_kind: str
    x_min: float
    x_max: float
    n_points: int

    def __post_init__(self):
        if self.domain_kind not in (FULL_LINE, HALF_LINE):
            raise DomainError(f"unknown domain_kind {self.domain_kind!r}")
        if not self.x_min < self.x_max:
            raise DomainError(f"x_min {self.x_min} must be < x_max {self.x_max}")
        if self.n_points < 3:
            raise DomainError("grid needs at least 3 points")
        if self.domain_kind == HALF_LINE and self.x_min <= 0.0:
            raise DomainError("half_line grid requires x_min > 0")

    @property
    def h(self) -> float:
        return (self.x_max - self.x_min) / (self.n_points - 1)

    @property
    def x(self) -> np.ndarray:
        xs = self.x_min + self.h * np.arange(self.n_points)
        xs.flags.writeable = False
        return xs

    @classmethod
    def full_line(cls, x_min: float, x_max: float, n_points: int) -> "Grid":
        return cls(FULL_LINE, float(x_min), float(x_max), int(n_points))

    @classmethod
    def half_line(cls, x_max: float, n_points: int, x_min: float | None = None) -> "Grid":
        """Half-line grid; by default x_min = h = x_max/n_points, i.e. the
        points j*h for j = 1..n_points."""
        if x_min is None:
            x_min = float(x_max) / int(n_points)
        return cls(HALF_LINE, float(x_min), float(x_max), int(n_points))

    def refined(self) -> "Grid":
        """Grid with spacing h/2.

        On the full line the endpoints are kept and the point count becomes
        2n-1.  On the half line with x_min = h the refined grid is j*(h/2)
        for j = 1..2n, so the left edge moves toward the origin with h.
        """
        if self.domain_kind == FULL_LINE:
            return Grid(FULL_LINE, self.x_min, self.x_max, 2 * self.n_points - 1)
        if abs(self.x_min - self.x_max / self.n_points) <= 1e-12 * self.h:
            return Grid.half_line(self.x_max, 2 * self.n_points)
        n = 2 * self.n_points - 1
        return Grid(HALF_LINE, self.x_min, self.x_max, n)


@dataclass(frozen=True)
class SampledFn:
    """Function samples bound to a grid. Values are read-only."""

    grid: Grid
    values: np.ndarray = field(repr=False)

    def __post_init__(self):
        v = np.asarray(self.values)
        if v.ndim != 1 or v.shape[0] != self.grid.n_points:
            raise DomainError(
                f"values length {v.shape} does not match grid n_points {self.grid.n_points}"
            )
        if not np.iscomplexobj(v):
            v = v.astype(float, copy=True)
        else:
            v = v.astype(complex, copy=True)
        v.flags.writeable = False
        object.__setattr__(self, "values", v)

    @property
    def x(self) -> np.ndarray:
        return self.grid.x


def same_grid(f: SampledFn, g: SampledFn) -> Grid:
    if f.grid != g.grid:
        raise DomainError("sampled functions live on different grids")
    return f.grid


def sample(grid: Grid, fn) -> SampledFn:
    return SampledFn(grid, fn(grid.x))


def derivative(f: SampledFn) -> SampledFn:
    """First derivative: central differences inside, one-sided 3-point
    stencils at the two endpoints. O(h^2), exact on quadratics."""
    v = f.values
    h = f.grid.h
    d = np.empty_like(v)
    d[1:-1] = (v[2:] - v[:-2]) / (2.0 * h)
    # Difference form of the one-sided stencils: exactly zero on constants.
    d[0] = (4.0 * (v[1] - v[0]) - (v[2] - v[0])) / (2.0 * h)
    d[-1] = (-4.0 * (v[-2] - v[-1]) + (v[-3] - v[-1])) / (2.0 * h)
    return SampledFn(f.grid, d)


def trapezoid_sum(f: SampledFn) -> float | complex:
    v = f.values
    return ((v[1:] + v[:-1]) / 2.0).sum() * f.grid.h


def cumulative_integral(f: SampledFn, anchor: float) -> SampledFn:
    """Trapezoid-rule running integral F with F(anchor) = 0.

    The anchor may fall between grid points; the offset is then obtained by
    linear interpolation of the running integral.
    """
    g = f.grid
    if not (g.x_min - 1e-12 * g.h <= anchor <= g.x_max + 1e-12 * g.h):
        raise DomainError(f"anchor {anchor} outside grid [{g.x_min}, {g.x_max}]")
    v = f.values
    acc = np.empty(g.n_points, dtype=v.dtype)
    acc[0] = 0.0
    np.cumsum((v[1:] + v[:-1]) * (g.h / 2.0), out=acc[1:])
    if np.iscomplexobj(acc):
        offset = np.interp(anchor, g.x, acc.real) + 1j * np.interp(anchor, g.x, acc.imag)
    else:
        offset = np.interp(anchor, g.x, acc)
    return SampledFn(g, acc - offset)


def l2_norm(f: SampledFn) -> float:
    v2 = np.abs(f.values) ** 2
    return float(np.sqrt(((v2[1:] + v2[:-1]) / 2.0).sum() * f.grid.h))


def normalize(f: SampledFn) -> SampledFn:
    """Scale to unit L2 norm under trapezoid quadrature.

    Sign convention (real input): the first sample whose magnitude exceeds
    1e-8 of the maximum is made positive.
    """
    nrm = l2_norm(f)
    if nrm == 0.0 or not np.isfinite(nrm):
        raise DegenerateInputError("cannot normalize: zero or non-finite norm")
    v = f.values / nrm
    if not np.iscomplexobj(v):
        peak = np.abs(v).max()
        idx = np.nonzero(np.abs(v) > _SIGN_FLOOR * peak)[0]
        if idx.size and v[idx[0]] < 0.0:
            v = -v
    return SampledFn(f.grid, v)


def l2_distance(f: SampledFn, g: SampledFn) -> float:
    same_grid(f, g)
    return l2_norm(SampledFn(f.grid, f.values - g.values))

"""Superpotential catalog and construction of partner potentials.

Units are hbar = 2m = 1 throughout, so a superpotential W generates the
partner pair V- = W^2 - W' and V+ = W^2 + W'. Catalog entries supply W, W'
and (where it exists in closed form) the antiderivative of W; custom entries
evaluate an expression AST and its exact symbolic derivative.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import expressions as ex
from .errors import ConfigurationError, EvaluationError
from .grids import FULL_LINE, HALF_LINE, Grid, SampledFn, same_grid


@dataclass(frozen=True)
class PartnerPair:
    """Sampled W, W' and the potentials they generate."""

    v_minus: SampledFn
    v_plus: SampledFn
    w: SampledFn
    w_prime: SampledFn


class Superpotential:
    """Base class; concrete variants implement w / w_prime evaluation."""

    domain_kind: str = FULL_LINE

    def w(self, x: np.ndarray) -> np.ndarray:
        raise NotImplementedError

    def w_prime(self, x: np.ndarray) -> np.ndarray:
        raise NotImplementedError

    def integral_w(self, x: np.ndarray) -> np.ndarray | None:
        """Closed-form antiderivative of W when available, else None."""
        return None

    def w_complex(self, z: np.ndarray) -> np.ndarray | None:
        """Evaluation at complex arguments; None when no analytic
        continuation is available."""
        return None

    def complex_poles(self) -> tuple[float, ...] | None:
        """Real locations where the continued W fails to be analytic;
        None when the variant cannot be continued at all."""
        return None

    def label(self) -> str:
        return type(self).__name__

    def to_config(self) -> dict:
        raise NotImplementedError


@dataclass(frozen=True)
class Oscillator(Superpotential):
    """W(x) = omega*x/2 on the full line."""

    omega: float
    domain_kind: str = field(default=FULL_LINE, init=False)

    def __post_init__(self):
        if self.omega <= 0:
            raise ConfigurationError("oscillator needs omega > 0")

    def w(self, x):
        return 0.5 * self.omega * x

    def w_prime(self, x):
        return np.full_like(np.asarray(x, dtype=float), 0.5 * self.omega)

    def integral_w(self, x):
        return 0.25 * self.omega * x**2

    def w_complex(self, z):
        return 0.5 * self.omega * z

    def complex_poles(self):
        return ()

    def label(self):
        return f"oscillator(omega={self.omega:g})"

    def to_config(self):
        return {"variant": "oscillator", "omega": self.omega}


@dataclass(frozen=True)
class _Radial(Superpotential):
    """W(r) = omega*r/2 + coupling/r on the half line."""

    omega: float
    l: float
    domain_kind: str = field(default=HALF_LINE, init=False)

    _variant = ""
    _offset = 0.0  # coupling = l + offset

    def __post_init__(self):
        if self.omega <= 0:
            raise ConfigurationError("radial superpotential needs omega > 0")
        if self.l >= -1:
            raise ConfigurationError(
                f"radial superpotential needs l < -1, got l = {self.l}"
            )

    @property
    def coupling(self) -> float:
        return self.l + self._offset

    def w(self, r):
        return 0.5 * self.omega * r + self.coupling / r

    def w_prime(self, r):
        return 0.5 * self.omega - self.coupling / r**2

    def integral_w(self, r):
        return 0.25 * self.omega * r**2 + self.coupling * np.log(r)

    def w_complex(self, z):
        return 0.5 * self.omega * z + self.coupling / z

    def complex_poles(self):
        return (0.0,)

    def label(self):
        return f"{self._variant}(omega={self.omega:g}, l={self.l:g})"

    def to_config(self):
        return {"variant": self._variant, "omega": self.omega, "l": self.l}


class BrokenRadial(_Radial):
    """W(r) = omega*r/2 - (l+1)/r with l < -1: neither exp(-int W) nor
    exp(+int W) is normalizable, so the pair has broken supersymmetry."""

    _variant = "broken_radial"

    @property
    def coupling(self):
        return -(self.l + 1.0)


class UnbrokenRadial1(_Radial):
    """W(r) = omega*r/2 + (l+1)/r: normalizable zero mode r^(-(l+1)) e^(-omega r^2/4)."""

    _variant = "unbroken_radial_1"
    _offset = 1.0


class UnbrokenRadial2(_Radial):
    """W(r) = omega*r/2 + (l+2)/r: normalizable zero mode r^(-(l+2)) e^(-omega r^2/4)."""

    _variant = "unbroken_radial_2"
    _offset = 2.0


@dataclass(frozen=True)
class CustomSuperpotential(Superpotential):
    """Superpotential given as an expression in x (see expressions.parse)."""

    expr_text: str
    params: tuple = ()
    domain_kind: str = FULL_LINE

    def __post_init__(self):
        if self.domain_kind not in (FULL_LINE, HALF_LINE):
            raise ConfigurationError(f"bad domain_kind {self.domain_kind!r}")
        ast = ex.parse(self.expr_text, dict(self.params))
        object.__setattr__(self, "_ast", ast)
        object.__setattr__(self, "_ast_diff", ast.diff())

    def w(self, x):
        return ex.evaluate_checked(self._ast, x)

    def w_prime(self, x):
        return ex.evaluate_checked(self._ast_diff, x)

    def w_complex(self, z):
        if not self._ast.is_entire():
            return None
        return np.asarray(self._ast.evaluate(np.asarray(z, dtype=complex)))

    def complex_poles(self):
        return () if self._ast.is_entire() else None

    def label(self):
        return f"custom({self.expr_text})"

    def to_config(self):
        cfg = {"variant": "custom", "expr": self.expr_text}
        if self.params:
            cfg["params"] = dict(self.params)
        if self.domain_kind != FULL_LINE:
            cfg["domain_kind"] = self.domain_kind
        return cfg


def superpotential_from_config(cfg: dict) -> Superpotential:
    kind = cfg.get("variant")
    if kind == "oscillator":
        return Oscillator(float(cfg["omega"]))
    if kind == "broken_radial":
        return BrokenRadial(float(cfg["omega"]), float(cfg["l"]))
    if kind == "unbroken_radial_1":
        return UnbrokenRadial1(float(cfg["omega"]), float(cfg["l"]))
    if kind == "unbroken_radial_2":
        return UnbrokenRadial2(float(cfg["omega"]), float(cfg["l"]))
    if kind == "custom":
        return CustomSuperpotential(
            str(cfg["expr"]),
            tuple(sorted((cfg.get("params") or {}).items())),
            cfg.get("domain_kind", FULL_LINE),
        )
    raise ConfigurationError(f"unknown superpotential variant {kind!r}")


def eval_superpotential(s: Superpotential, grid: Grid) -> tuple[SampledFn, SampledFn]:
    """Sample W and its exact derivative on the grid."""
    if s.domain_kind != grid.domain_kind:
        raise ConfigurationError(
            f"{s.label()} needs a {s.domain_kind} grid, got {grid.domain_kind}"
        )
    x = grid.x
    with np.errstate(divide="ignore", invalid="ignore", over="ignore"):
        w = np.asarray(s.w(x), dtype=float)
        wp = np.asarray(s.w_prime(x), dtype=float)
    for name, arr in (("W", w), ("W'", wp)):
        bad = ~np.isfinite(arr)
        if bad.any():
            raise EvaluationError(f"{name} of {s.label()} not finite at x = {x[bad][0]!r}")
    return SampledFn(grid, w), SampledFn(grid, wp)


def partner_potentials(s: Superpotential, grid: Grid) -> PartnerPair:
    """V-/V+ = W^2 -/+ W' sampled on the grid."""
    w, wp = eval_superpotential(s, grid)
    w2 = w.values**2
    return PartnerPair(
        v_minus=SampledFn(grid, w2 - wp.values),
        v_plus=SampledFn(grid, w2 + wp.values),
        w=w,
        w_prime=wp,
    )


def check_identity(lhs: SampledFn, rhs: SampledFn) -> float:
    """Sup-norm of lhs - rhs; the caller compares against its tolerance."""
    same_grid(lhs, rhs)
    return float(np.abs(lhs.values - rhs.values).max())


def fit_constant_offset(lhs: SampledFn, rhs: SampledFn) -> tuple[float, float]:
    """Best constant c such that lhs ~= rhs + c, and the sup-norm residual
    after removing it. Used for identities that hold only up to a shift."""
    same_grid(lhs, rhs)
    diff = lhs.values - rhs.values
    c = float(np.mean(diff))
    return c, float(np.abs(diff - c).max())


def radial_oscillator_potential(
    grid: Grid, omega: float, centrifugal: float, shift: float
) -> SampledFn:
    """Closed-form half-line potential omega^2 r^2/4 + centrifugal/r^2 + shift."""
    if grid.domain_kind != HALF_LINE:
        raise ConfigurationError("radial potential needs a half_line grid")
    r = grid.x
    return SampledFn(grid, 0.25 * omega**2 * r**2 + centrifugal / r**2 + shift)


def broken_radial_v_minus(grid: Grid, omega: float, l: float) -> SampledFn:
    return radial_oscillator_potential(grid, omega, l * (l + 1.0), -(l + 1.5) * omega)


def broken_radial_v_plus(grid: Grid, omega: float, l: float) -> SampledFn:
    return radial_oscillator_potential(grid, omega, (l + 1.0) * (l + 2.0), -(l + 0.5) * omega)


def unbroken_radial_v_minus_1(grid: Grid, omega: float, l: float) -> SampledFn:
    return radial_oscillator_potential(grid, omega, (l + 1.0) * (l + 2.0), (l + 0.5) * omega)


def unbroken_radial_v_minus_2(grid: Grid, omega: float, l: float) -> SampledFn:
    return radial_oscillator_potential(grid, omega, (l + 2.0) * (l + 3.0), (l + 1.5) * omega)

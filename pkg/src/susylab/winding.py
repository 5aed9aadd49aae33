"""Quantization condition as a contour integral in the complex plane.

For a bound state whose logarithmic derivative has the meromorphic form
q(z) = -W(z) + P'(z)/P(z), the integral (1/2 pi i) closed-contour q dz
counts the poles of q inside the contour: these are the zeros of P, i.e.
the wavefunction nodes, so the integral evaluates to the state index n
whenever W itself is analytic inside. (This is the logarithmic-derivative
form of the classical quantization integral (1/2 pi) contour p dx = n
with p = -i q and hbar = 1.)
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import ConfigurationError
from .polynomials import Polynomial
from .potentials import Superpotential

# Relative floor for "P has no zero on the contour".
_ZERO_ON_CONTOUR_REL = 1e-8


@dataclass(frozen=True)
class RectContour:
    """Axis-parallel rectangle symmetric about the real axis."""

    x_left: float
    x_right: float
    y_half: float
    samples_per_side: int = 4096

    def __post_init__(self):
        if not self.x_left < self.x_right:
            raise ConfigurationError("need x_left < x_right")
        if self.y_half <= 0.0:
            raise ConfigurationError("need y_half > 0")
        if self.samples_per_side < 64:
            raise ConfigurationError("need samples_per_side >= 64")

    def corners(self) -> tuple[complex, complex, complex, complex]:
        # Counterclockwise starting from the lower-left corner.
        return (
            complex(self.x_left, -self.y_half),
            complex(self.x_right, -self.y_half),
            complex(self.x_right, self.y_half),
            complex(self.x_left, self.y_half),
        )

    def contains_real_point(self, x0: float) -> bool:
        return self.x_left < x0 < self.x_right

    def sides(self):
        """Sample points and the complex step of each of the four sides."""
        c = self.corners()
        m = self.samples_per_side
        for a, b in zip(c, c[1:] + c[:1]):
            t = np.linspace(0.0, 1.0, m)
            yield a + (b - a) * t, (b - a) / (m - 1)


def winding_number(w: Superpotential, p: Polynomial, contour: RectContour) -> dict:
    """(1/2 pi i) closed-contour integral of q(z) = -W(z) + P'(z)/P(z),
    trapezoid rule side by side. Returns the raw complex integral and its
    rounded real part (the enclosed moving-pole count)."""
    poles = w.complex_poles()
    if poles is None:
        raise ConfigurationError(
            f"{w.label()} has no analytic continuation for contour integration"
        )
    inside = [x0 for x0 in poles if contour.contains_real_point(x0)]
    if inside:
        raise ConfigurationError(
            f"{w.label()} is singular at {inside} inside the contour; "
            "move the contour away from the singularity"
        )
    dp = p.derivative()

    total = 0.0 + 0.0j
    sides = list(contour.sides())
    all_abs = [np.abs(p(z)) for z, _ in sides]
    # The real-axis crossings can sit between samples; check them outright.
    crossings = np.abs(p(np.array([contour.x_left + 0j, contour.x_right + 0j])))
    pmin = min(min(a.min() for a in all_abs), crossings.min())
    pmax = max(a.max() for a in all_abs)
    if pmin <= _ZERO_ON_CONTOUR_REL * pmax:
        raise ConfigurationError(
            "polynomial has a zero on (or numerically on) the contour"
        )
    for z, dz in sides:
        q = -w.w_complex(z) + dp(z) / p(z)
        total += ((q[1:] + q[:-1]) / 2.0).sum() * dz
    integral = total / (2.0j * np.pi)
    return {"integral": complex(integral), "rounded": int(round(integral.real))}


def contour_for_roots(p: Polynomial, x_pad: float = 1.5, y_half: float = 1.0,
                      samples_per_side: int = 4096) -> RectContour:
    """Rectangle enclosing all real roots of p with the given margin."""
    roots = p.real_roots()
    extent = float(np.abs(roots).max()) if roots.size else 0.0
    return RectContour(
        x_left=-(extent + x_pad),
        x_right=extent + x_pad,
        y_half=y_half,
        samples_per_side=samples_per_side,
    )

"""Classical orthogonal polynomials via their three-term recurrences."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import ConfigurationError


@dataclass(frozen=True)
class Polynomial:
    """Dense polynomial with real coefficients in ascending degree order."""

    coefficients: tuple

    def __post_init__(self):
        coeffs = tuple(float(c) for c in self.coefficients)
        while len(coeffs) > 1 and coeffs[-1] == 0.0:
            coeffs = coeffs[:-1]
        object.__setattr__(self, "coefficients", coeffs)

    @property
    def degree(self) -> int:
        return len(self.coefficients) - 1

    def __call__(self, z):
        # Horner evaluation; works for real and complex arguments.
        acc = np.zeros_like(np.asarray(z)) + self.coefficients[-1]
        for c in reversed(self.coefficients[:-1]):
            acc = acc * z + c
        return acc

    def derivative(self) -> "Polynomial":
        if self.degree == 0:
            return Polynomial((0.0,))
        return Polynomial(tuple(k * c for k, c in enumerate(self.coefficients) if k > 0))

    def real_roots(self) -> np.ndarray:
        if self.degree == 0:
            return np.array([])
        roots = np.roots(self.coefficients[::-1])
        return np.sort(roots[np.abs(roots.imag) < 1e-9].real)


def _poly_times_x(coeffs: list[float]) -> list[float]:
    return [0.0] + coeffs


def _poly_add(a: list[float], b: list[float]) -> list[float]:
    n = max(len(a), len(b))
    return [(a[i] if i < len(a) else 0.0) + (b[i] if i < len(b) else 0.0) for i in range(n)]


def _poly_scale(a: list[float], s: float) -> list[float]:
    return [s * c for c in a]


def hermite(n: int) -> Polynomial:
    """Physicists' Hermite H_n: H_{n+1} = 2x H_n - 2n H_{n-1}, H_0 = 1, H_1 = 2x."""
    if n < 0:
        raise ConfigurationError("polynomial degree must be >= 0")
    prev, cur = [1.0], [0.0, 2.0]
    if n == 0:
        return Polynomial(tuple(prev))
    for k in range(1, n):
        nxt = _poly_add(_poly_scale(_poly_times_x(cur), 2.0), _poly_scale(prev, -2.0 * k))
        prev, cur = cur, nxt
    return Polynomial(tuple(cur))


def laguerre(n: int, alpha: float = 0.0) -> Polynomial:
    """Generalized Laguerre L_n^alpha:
    (n+1) L_{n+1} = (2n+1+alpha-x) L_n - (n+alpha) L_{n-1}."""
    if n < 0:
        raise ConfigurationError("polynomial degree must be >= 0")
    prev, cur = [1.0], [1.0 + alpha, -1.0]
    if n == 0:
        return Polynomial(tuple(prev))
    for k in range(1, n):
        term = _poly_add(
            _poly_scale(cur, 2.0 * k + 1.0 + alpha),
            _poly_scale(_poly_times_x(cur), -1.0),
        )
        nxt = _poly_scale(_poly_add(term, _poly_scale(prev, -(k + alpha))), 1.0 / (k + 1.0))
        prev, cur = cur, nxt
    return Polynomial(tuple(cur))


def classical_polynomial(kind: str, n: int, alpha: float = 0.0) -> Polynomial:
    if kind == "hermite":
        return hermite(n)
    if kind == "laguerre":
        return laguerre(n, alpha)
    raise ConfigurationError(f"unknown polynomial kind {kind!r}")

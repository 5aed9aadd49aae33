"""One-parameter isospectral deformation of a partner pair.

Starting from a superpotential W with normalizable zero mode psi0, the
deformed superpotential is

    W~ = W + phi,      phi = psi0^2 / (I0 + lambda),

with I0 the running integral of psi0^2 anchored at the lower grid edge, so
I0 runs from 0 to 1 and any lambda > 0 or lambda < -1 keeps the denominator
away from zero. phi equals d/dx ln(I0 + lambda) and is the solution of the
Bernoulli equation phi^2 + 2 W phi + phi' = 0, which is exactly the
condition that the plus partner is untouched: W~^2 + W~' = V+. The minus
partner deforms into

    V-~ = V- - 4 psi0 psi0' / (I0 + lambda) + 2 psi0^4 / (I0 + lambda)^2

which is strictly isospectral with V- (ground state included) but not of
the same functional form.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .eigensolve import DEFAULT_SEED, DEFAULT_TOL, solve_spectrum
from .errors import PhaseError, SingularFamilyError, SolverError
from .grids import (
    FULL_LINE,
    Grid,
    SampledFn,
    cumulative_integral,
    derivative,
    l2_distance,
    normalize,
)
from .potentials import Superpotential, eval_superpotential, partner_potentials

# Smallest allowed |I0 + lambda| on the grid.
_DENOM_FLOOR = 1e-6
# Norm growth (extended domain over original) that marks a non-normalizable
# ground-state candidate.
_NORM_GROWTH_LIMIT = 1.5
# Agreement required between the analytic and numeric ground states.
_ROUTE_AGREEMENT = 1e-4

ANALYTIC = "analytic"
NUMERIC = "numeric"
BOTH = "both"


@dataclass(frozen=True)
class DeformationParams:
    lam: float

    def __post_init__(self):
        if not (self.lam > 0.0 or self.lam < -1.0):
            raise SingularFamilyError(
                f"lambda must be > 0 or < -1 to keep I0 + lambda nonzero; got {self.lam}"
            )


@dataclass(frozen=True)
class DeformedFamily:
    params: DeformationParams
    grid: Grid
    psi0: SampledFn
    psi0_prime: SampledFn
    i0: SampledFn
    phi: SampledFn
    w: SampledFn
    w_prime: SampledFn
    w_tilde: SampledFn
    v_minus: SampledFn
    v_plus: SampledFn
    v_minus_tilde: SampledFn
    diagnostics: dict


def _extended_grid(grid: Grid) -> Grid:
    """Domain enlarged toward the regions where a bad candidate blows up:
    toward the origin on the half line, outward on the full line."""
    if grid.domain_kind == FULL_LINE:
        return Grid(FULL_LINE, 2.0 * grid.x_min, 2.0 * grid.x_max, 2 * grid.n_points - 1)
    return Grid(grid.domain_kind, 0.5 * grid.x_min, grid.x_max, 2 * grid.n_points - 1)


def _log_candidate(s: Superpotential, grid: Grid) -> np.ndarray:
    """-integral of W on the grid: closed form when the catalog provides it,
    otherwise a trapezoid running integral of the W samples."""
    closed = s.integral_w(grid.x)
    if closed is not None:
        return -np.asarray(closed, dtype=float)
    w, _ = eval_superpotential(s, grid)
    return -cumulative_integral(w, anchor=grid.x_min).values


def _norm_growth_ratio(s: Superpotential, grid: Grid) -> float:
    """Norm of exp(-int W) on an extended domain over the original domain.

    Ratios near 1 mean the candidate is already saturated (normalizable);
    large ratios mean the tail keeps growing (non-normalizable).
    """
    ext = _extended_grid(grid)
    log_c = _log_candidate(s, ext)
    log_density = 2.0 * (log_c - log_c.max())
    density = np.exp(log_density)
    inside = (ext.x >= grid.x_min - 1e-12) & (ext.x <= grid.x_max + 1e-12)
    h = ext.h
    total = float(((density[1:] + density[:-1]) / 2.0).sum() * h)
    d_in = np.where(inside, density, 0.0)
    orig = float(((d_in[1:] + d_in[:-1]) / 2.0).sum() * h)
    if orig == 0.0:
        return np.inf
    return total / orig


def ground_state(
    s: Superpotential,
    grid: Grid,
    route: str = ANALYTIC,
    tol: float = DEFAULT_TOL,
    seed: int = DEFAULT_SEED,
) -> SampledFn:
    """Normalized zero mode exp(-int W) of V-.

    analytic: normalize exp(-int W) sampled on the grid;
    numeric:  index-0 state of the V- eigensolve;
    both:     analytic result, asserted close to the numeric one in L2.

    Raises PhaseError when the candidate is not normalizable (the norm keeps
    growing when the domain is extended), i.e. when SUSY is broken.
    """
    ratio = _norm_growth_ratio(s, grid)
    if not np.isfinite(ratio) or ratio > _NORM_GROWTH_LIMIT:
        raise PhaseError(
            f"exp(-int W) of {s.label()} is not normalizable "
            f"(extended-domain norm ratio {ratio:.3g}); broken phase"
        )
    log_c = _log_candidate(s, grid)
    analytic = normalize(SampledFn(grid, np.exp(log_c - log_c.max())))
    if route == ANALYTIC:
        return analytic
    pair = partner_potentials(s, grid)
    numeric = solve_spectrum(pair.v_minus, 1, tol, seed, s.label() + ":V-").eigenpairs[0]
    if route == NUMERIC:
        return numeric.wavefunction
    if route == BOTH:
        dist = l2_distance(analytic, numeric.wavefunction)
        if dist > _ROUTE_AGREEMENT:
            raise SolverError(
                f"analytic and numeric ground states disagree: L2 distance {dist:.3e}"
            )
        return analytic
    raise SolverError(f"unknown ground-state route {route!r}")


def build_family(
    s: Superpotential,
    grid: Grid,
    params: DeformationParams,
    route: str = ANALYTIC,
    tol: float = DEFAULT_TOL,
    seed: int = DEFAULT_SEED,
) -> DeformedFamily:
    """Construct the lambda-family and its defining residual diagnostics."""
    psi0 = ground_state(s, grid, route=route, tol=tol, seed=seed)
    pair = partner_potentials(s, grid)
    if route == NUMERIC:
        psi0_prime = derivative(psi0)
    else:
        # The zero mode satisfies psi0' = -W psi0 exactly.
        psi0_prime = SampledFn(grid, -pair.w.values * psi0.values)

    p2 = psi0.values**2
    i0 = cumulative_integral(SampledFn(grid, p2), anchor=grid.x_min)
    denom = i0.values + params.lam
    if np.abs(denom).min() < _DENOM_FLOOR:
        raise SingularFamilyError(
            f"I0 + lambda reaches {np.abs(denom).min():.3e}; family singular"
        )
    phi = SampledFn(grid, p2 / denom)
    w_tilde = SampledFn(grid, pair.w.values + phi.values)
    v_minus_tilde = SampledFn(
        grid,
        pair.v_minus.values
        - 4.0 * psi0.values * psi0_prime.values / denom
        + 2.0 * p2**2 / denom**2,
    )
    family = DeformedFamily(
        params=params,
        grid=grid,
        psi0=psi0,
        psi0_prime=psi0_prime,
        i0=i0,
        phi=phi,
        w=pair.w,
        w_prime=pair.w_prime,
        w_tilde=w_tilde,
        v_minus=pair.v_minus,
        v_plus=pair.v_plus,
        v_minus_tilde=v_minus_tilde,
        diagnostics={},
    )
    family.diagnostics["bernoulli_residual"] = bernoulli_residual(family)
    family.diagnostics["strictness_residual"] = strictness_check(family, pair.v_plus)
    return family


def bernoulli_residual(family: DeformedFamily, phi: SampledFn | None = None) -> float:
    """max interior |phi^2 + 2 W phi + phi'| with phi' from the grid stencil."""
    phi = phi if phi is not None else family.phi
    phip = derivative(phi).values
    res = phi.values**2 + 2.0 * family.w.values * phi.values + phip
    return float(np.abs(res[1:-1]).max())


def strictness_check(family: DeformedFamily, v_plus: SampledFn) -> float:
    """max interior |W~^2 + W~' - V+|: the deformation must leave V+ alone.

    On the full line W~ is differentiated with the grid stencil outright.
    On the half line the stencil cannot cross the 1/r part of W near the
    origin without drowning the check in truncation error, so there W~' is
    assembled as exact W' plus the stencil derivative of the smooth phi.
    """
    if family.grid.domain_kind == FULL_LINE:
        wt_prime = derivative(family.w_tilde).values
    else:
        wt_prime = family.w_prime.values + derivative(family.phi).values
    res = family.w_tilde.values**2 + wt_prime - v_plus.values
    return float(np.abs(res[1:-1]).max())


def isospectrality_check(
    v_minus: SampledFn,
    family: DeformedFamily,
    k: int,
    tol: float = DEFAULT_TOL,
    seed: int = DEFAULT_SEED,
) -> dict:
    """Solve k levels of V- and of the deformed V-~ on the family grid and
    compare level by level (energies and node counts)."""
    spec = solve_spectrum(v_minus, k, tol, seed, "V-")
    spec_t = solve_spectrum(
        family.v_minus_tilde, k, tol, seed, f"V-~(lambda={family.params.lam:g})"
    )
    dev = np.abs(spec.energies - spec_t.energies)
    return {
        "max_level_deviation": float(dev.max()),
        "node_counts_equal": spec.node_counts == spec_t.node_counts,
        "energies_minus": [float(e) for e in spec.energies],
        "energies_tilde": [float(e) for e in spec_t.energies],
        "node_counts_minus": spec.node_counts,
        "node_counts_tilde": spec_t.node_counts,
    }

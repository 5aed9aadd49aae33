"""Finite-difference Schrodinger eigensolver with certified eigenvalue indices.

The Hamiltonian -d^2/dx^2 + V (units hbar = 2m = 1) is discretized with the
3-point stencil on the interior of a uniform grid, Dirichlet at both ends.
Eigenvalues of the resulting symmetric tridiagonal matrix are located by
bisection on the Sturm sign count (LAPACK stebz does the sweep work); every
returned eigenvalue is then certified in-house: the sign count must step from
n to n+1 across [E - d, E + d] with d = tol*max(1,|E|), otherwise the value
is re-bisected from scratch. Eigenvectors come from seeded inverse iteration.
Index certainty is what the node-counting experiments rest on, which is why
shooting-style solvers (which can skip levels silently) are not used.
"""
from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np
from scipy.linalg import eigh_tridiagonal, solve_banded

from .errors import BoundaryLeakWarning, DegenerateInputError, SolverError
from .grids import Grid, SampledFn, normalize

DEFAULT_TOL = 1e-9
DEFAULT_SEED = 714252
NODE_EPS_REL = 1e-6
# Relative amplitude at the first/last interior point above which the
# Dirichlet box is considered too small for the state.
LEAK_THRESHOLD = 1e-6
_MAX_INVERSE_ITER = 5


@dataclass(frozen=True)
class DiscreteHamiltonian:
    """Symmetric tridiagonal FD Hamiltonian on the grid interior."""

    grid: Grid
    diag: np.ndarray
    offdiag: float

    @classmethod
    def from_potential(cls, v: SampledFn) -> "DiscreteHamiltonian":
        h = v.grid.h
        diag = 2.0 / h**2 + np.asarray(v.values[1:-1], dtype=float)
        diag.flags.writeable = False
        return cls(grid=v.grid, diag=diag, offdiag=-1.0 / h**2)

    @property
    def dim(self) -> int:
        return self.diag.shape[0]

    def apply(self, x: np.ndarray) -> np.ndarray:
        y = self.diag * x
        y[:-1] += self.offdiag * x[1:]
        y[1:] += self.offdiag * x[:-1]
        return y


@dataclass(frozen=True)
class Eigenpair:
    """One solved bound state.

    ``residual`` is the discrete-solve residual ||T psi - E_grid psi||_2 on
    the solve grid; after Richardson extrapolation ``energy`` is the
    continuum estimate while the residual still refers to the grid solve.
    """

    index: int
    energy: float
    wavefunction: SampledFn
    node_count: int
    residual: float


@dataclass(frozen=True)
class Spectrum:
    eigenpairs: tuple
    grid: Grid
    potential_id: str
    refined_from: tuple | None = None

    def __post_init__(self):
        energies = [p.energy for p in self.eigenpairs]
        if any(b <= a for a, b in zip(energies, energies[1:])):
            raise SolverError(f"energies not strictly increasing: {energies}")
        if [p.index for p in self.eigenpairs] != list(range(len(energies))):
            raise SolverError("eigenpair indices not consecutive from 0")

    @property
    def energies(self) -> np.ndarray:
        return np.array([p.energy for p in self.eigenpairs])

    @property
    def node_counts(self) -> list[int]:
        return [p.node_count for p in self.eigenpairs]


def sturm_count(diag: np.ndarray, offdiag: float, e) -> np.ndarray:
    """Number of eigenvalues of the tridiagonal matrix strictly below e.

    Vectorized over a batch of shifts e; runs the LDL^T sign recurrence.
    """
    e_arr = np.atleast_1d(np.asarray(e, dtype=float))
    off2 = offdiag * offdiag
    d = diag[0] - e_arr
    d[d == 0.0] = -1e-300
    count = (d < 0.0).astype(np.int64)
    with np.errstate(divide="ignore", invalid="ignore", over="ignore"):
        for a in diag[1:]:
            d = (a - e_arr) - off2 / d
            d[d == 0.0] = -1e-300
            count += d < 0.0
    return count if np.ndim(e) else count[0]


def bisect_eigenvalues(
    diag: np.ndarray, offdiag: float, k: int, tol: float = DEFAULT_TOL
) -> np.ndarray:
    """Lowest k eigenvalues by pure Sturm bisection from Gershgorin bounds,
    each interval narrowed until its width is below tol*max(1,|E|)."""
    idx = np.arange(k)
    lo = np.full(k, float(diag.min()) - 2.0 * abs(offdiag))
    hi = np.full(k, float(diag.max()) + 2.0 * abs(offdiag))
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        if np.all(hi - lo <= tol * np.maximum(1.0, np.abs(mid))):
            break
        counts = sturm_count(diag, offdiag, mid)
        above = counts > idx
        hi = np.where(above, mid, hi)
        lo = np.where(above, lo, mid)
    return 0.5 * (lo + hi)


def _certify_indices(diag, offdiag, energies, tol) -> np.ndarray:
    """True per eigenvalue when the Sturm count brackets index n at E +- d."""
    delta = tol * np.maximum(1.0, np.abs(energies))
    c_lo = sturm_count(diag, offdiag, energies - delta)
    c_hi = sturm_count(diag, offdiag, energies + delta)
    idx = np.arange(len(energies))
    return (c_lo <= idx) & (idx < c_hi)


def _inverse_iteration(ham, energy, delta, rng, previous, cluster_mask):
    m = ham.dim
    ab = np.zeros((3, m))
    ab[0, 1:] = ham.offdiag
    ab[2, :-1] = ham.offdiag
    best_x, best_res = None, np.inf
    # Second pass nudges the shift off an exactly singular T - E.
    for shift in (energy, energy + 0.1 * delta):
        ab[1, :] = ham.diag - shift
        x = rng.standard_normal(m)
        x /= np.linalg.norm(x)
        try:
            for _ in range(_MAX_INVERSE_ITER):
                x = solve_banded((1, 1), ab, x, check_finite=False)
                for j, prev in enumerate(previous):
                    if cluster_mask[j]:
                        x -= np.dot(prev, x) * prev
                nrm = np.linalg.norm(x)
                if not np.isfinite(nrm) or nrm == 0.0:
                    raise np.linalg.LinAlgError("inverse iteration collapsed")
                x /= nrm
                residual = float(np.linalg.norm(ham.apply(x) - energy * x))
                if residual < best_res:
                    best_x, best_res = x, residual
                if residual <= delta:
                    return x, residual
        except np.linalg.LinAlgError:
            continue
    return best_x, best_res


def count_nodes(psi: SampledFn, eps_rel: float = NODE_EPS_REL) -> int:
    """Interior sign changes of psi, skipping samples below eps_rel*max|psi|
    (on-node samples) and the two boundary samples."""
    v = np.asarray(psi.values, dtype=float)
    floor = eps_rel * np.abs(v).max()
    interior = v[1:-1]
    kept = interior[np.abs(interior) > floor]
    if kept.size == 0:
        raise DegenerateInputError("all samples below the node threshold")
    return int(np.count_nonzero(kept[:-1] * kept[1:] < 0.0))


def solve_spectrum(
    v: SampledFn,
    k: int,
    tol: float = DEFAULT_TOL,
    seed: int = DEFAULT_SEED,
    potential_id: str = "V",
) -> Spectrum:
    """Lowest k eigenpairs of -psi'' + V psi = E psi with Dirichlet ends.

    Eigenvalues are certified against the in-house Sturm count (and
    re-bisected on certificate failure); eigenvectors use seeded inverse
    iteration with re-orthogonalization inside degenerate clusters.
    """
    if k < 1:
        raise SolverError("need k >= 1 eigenvalues")
    if np.iscomplexobj(v.values):
        raise SolverError("potential must be real-valued")
    ham = DiscreteHamiltonian.from_potential(v)
    if k > ham.dim:
        raise SolverError(f"k={k} exceeds interior dimension {ham.dim}")

    off = np.full(ham.dim - 1, ham.offdiag)
    energies = np.asarray(
        eigh_tridiagonal(
            ham.diag, off, eigvals_only=True, select="i",
            select_range=(0, k - 1), lapack_driver="stebz", tol=tol,
        ),
        dtype=float,
    )
    ok = _certify_indices(ham.diag, ham.offdiag, energies, tol)
    if not ok.all():
        refined = bisect_eigenvalues(ham.diag, ham.offdiag, k, tol)
        energies = np.where(ok, energies, refined)
        if not _certify_indices(ham.diag, ham.offdiag, energies, tol).all():
            raise SolverError("Sturm certificate failed after re-bisection")

    rng = np.random.default_rng(seed)
    deltas = tol * np.maximum(1.0, np.abs(energies))
    vectors: list[np.ndarray] = []
    pairs = []
    leaking = []
    for n, energy in enumerate(energies):
        cluster = [
            abs(energy - energies[j]) < 10.0 * deltas[n] for j in range(len(vectors))
        ]
        x, residual = _inverse_iteration(ham, energy, deltas[n], rng, vectors, cluster)
        if residual > 10.0 * deltas[n]:
            raise SolverError(
                f"inverse iteration did not converge for index {n} "
                f"(residual {residual:.3e})"
            )
        vectors.append(x)
        full = np.zeros(v.grid.n_points)
        full[1:-1] = x
        psi = normalize(SampledFn(v.grid, full))
        amp = np.abs(psi.values)
        # Half-line grids regularize the origin by a Dirichlet wall at
        # x_min = eps, where the state rises like a power of x by design;
        # only the outer boundary indicates a too-small box there.
        if v.grid.domain_kind == "half_line":
            edge = amp[-2]
        else:
            edge = max(amp[1], amp[-2])
        if edge > LEAK_THRESHOLD * amp.max():
            leaking.append(n)
        pairs.append(
            Eigenpair(
                index=n,
                energy=float(energy),
                wavefunction=psi,
                node_count=count_nodes(psi),
                residual=residual,
            )
        )
    if leaking:
        warnings.warn(
            f"{potential_id}: states {leaking} have boundary amplitude above "
            f"{LEAK_THRESHOLD:g} of peak; enlarge the box",
            BoundaryLeakWarning,
            stacklevel=2,
        )
    return Spectrum(eigenpairs=tuple(pairs), grid=v.grid, potential_id=potential_id)


def refine_richardson(
    v_builder,
    grid: Grid,
    k: int,
    tol: float = DEFAULT_TOL,
    seed: int = DEFAULT_SEED,
    potential_id: str = "V",
) -> Spectrum:
    """Solve at spacings h and h/2 and extrapolate E = (4 E_half - E_h)/3,
    removing the O(h^2) stencil error. Wavefunctions come from the fine grid.

    ``v_builder(grid) -> SampledFn`` resamples the potential on each grid.
    """
    coarse = solve_spectrum(v_builder(grid), k, tol, seed, potential_id)
    fine_grid = grid.refined()
    fine = solve_spectrum(v_builder(fine_grid), k, tol, seed, potential_id)
    e_c, e_f = coarse.energies, fine.energies
    refined = (4.0 * e_f - e_c) / 3.0
    pairs = tuple(
        Eigenpair(
            index=p.index,
            energy=float(refined[p.index]),
            wavefunction=p.wavefunction,
            node_count=p.node_count,
            residual=p.residual,
        )
        for p in fine.eigenpairs
    )
    return Spectrum(
        eigenpairs=pairs,
        grid=fine_grid,
        potential_id=potential_id,
        refined_from=(tuple(e_c), tuple(e_f)),
    )

"""Exception types shared across the package."""


class SusyLabError(Exception):
    """Base class for all package errors."""


class ConfigurationError(SusyLabError):
    """Invalid configuration: bad parameters, domain mismatch, bad contour."""


class DomainError(SusyLabError):
    """Inputs live on incompatible grids or outside the grid domain."""


class DegenerateInputError(SusyLabError):
    """Input carries no usable signal (zero function, empty mask)."""


class EvaluationError(SusyLabError):
    """An expression produced a non-finite value at a grid point."""


class PhaseError(SusyLabError):
    """The superpotential does not admit a normalizable ground state."""


class SolverError(SusyLabError):
    """Eigensolver failed to converge or to certify an eigenvalue index."""


class PairingError(SusyLabError):
    """Spectra cannot be matched into degenerate pairs at the given tolerance."""


class SingularFamilyError(SusyLabError):
    """Deformation denominator I0 + lambda approaches zero on the grid."""


class BoundaryLeakWarning(UserWarning):
    """A solved state has non-negligible amplitude at the grid boundary."""

"""susylab: numerical laboratory for supersymmetric partner potentials.

Builds partner pairs V-/V+ from a superpotential, solves both spectra with
index-certified eigenvalues, verifies the node-count criterion on degenerate
pairs together with the logarithmic-derivative relations, evaluates the
quantization winding integrals, and exercises the strictly isospectral
one-parameter deformation. A FastAPI service (susylab.service) exposes the
operations; the command line (susylab.cli) is a thin client of it.
"""

__version__ = "0.1.0"

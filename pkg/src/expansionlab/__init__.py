"""expansionlab: a numerical bench for eigenfunction-expansion quantum dynamics.

Implements and audits, at desk scale, the arithmetic of expanding wave
functions over eigenbases (Landau levels, plane waves, a 1-D box), propagating
expansion coefficients through first-order explicit slicing against a unitary
contrast integrator, and tracking how potentials, phases, and observables
transform together under a gauge function.
"""

__version__ = "0.1.0"

from . import basis, expansion, gauge, propagation, specfun  # noqa: F401

__all__ = ["basis", "expansion", "gauge", "propagation", "specfun", "__version__"]

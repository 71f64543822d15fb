"""Characteristic structure, Riemann invariants and nonclassical-symmetry
verification for 1-D quasilinear hyperbolic systems, with the flat-bottom
shallow-water equations as the worked instance."""

from .core import (
    EigenStructure,
    QuasilinearSystem,
    check_strict_hyperbolicity,
    eigen_structure,
    eval_matrix,
)
from .errors import (
    BlowUpError,
    CFLError,
    CharlabError,
    DomainError,
    DryStateError,
    MultivaluedError,
    NonHyperbolicError,
    OutOfDomainError,
    SingularityError,
)
from .field import SolutionField
from .swe import (
    InvariantPair,
    SWState,
    riemann_invariants,
    state_from_invariants,
    sw_eigenvalues,
    sw_matrix,
)

__version__ = "0.1.0"

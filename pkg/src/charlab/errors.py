"""Exception hierarchy shared by all charlab modules."""


class CharlabError(Exception):
    """Base class for every error raised by charlab."""


class DomainError(CharlabError, ValueError):
    """A state or point lies outside the admissible set."""


class NonHyperbolicError(CharlabError, ValueError):
    """A matrix has a complex-conjugate eigenvalue pair."""

    def __init__(self, message, pair=None):
        super().__init__(message)
        self.pair = pair


class DryStateError(DomainError):
    """Riemann invariants too close together to reconstruct a positive depth."""


class SingularityError(CharlabError, ZeroDivisionError):
    """A denominator fell inside the singularity margin."""

    def __init__(self, message, denominator=None):
        super().__init__(message)
        self.denominator = denominator


class MultivaluedError(CharlabError, ValueError):
    """The implicit simple-wave relation has no unique root (past the fold)."""


class OutOfDomainError(DomainError):
    """A requested point maps outside the region where a solution is defined."""


class BlowUpError(CharlabError, ArithmeticError):
    """Spatial gradients exceeded the blow-up threshold during a solve."""


class CFLError(CharlabError, ValueError):
    """The time step violates the CFL restriction."""

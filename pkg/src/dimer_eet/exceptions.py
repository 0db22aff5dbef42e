"""Exception types raised across the package."""


class DimerError(Exception):
    """Base class for all errors raised by :mod:`dimer_eet`."""


class ParameterError(DimerError, ValueError):
    """Invalid physical parameter or argument."""


class DegenerateRelaxation(DimerError):
    """The population relaxation rate Gamma_23 + Gamma_32 vanishes."""


class InvalidState(DimerError, ValueError):
    """A density matrix or moment set violates its invariants."""


class NegativeEigenvalue(InvalidState):
    """An eigenvalue that must be non-negative is below the clamp threshold."""


class StepSizeUnderflow(DimerError):
    """Adaptive step-size control stalled during propagation."""


class InvariantViolation(DimerError):
    """Trace, Hermiticity or positivity drifted beyond tolerance."""


class KernelResolutionFailure(DimerError):
    """The numerical kernel dimension of a Liouvillian is ambiguous."""

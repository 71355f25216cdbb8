"""Exception hierarchy shared across the toolkit."""


class BnecertError(Exception):
    """Base class for all toolkit errors."""


class ExprSyntaxError(BnecertError):
    """Malformed expression text; carries the byte offset of the problem."""

    def __init__(self, message, offset):
        super().__init__(f"{message} (at offset {offset})")
        self.offset = offset


class UnknownIdentifier(BnecertError):
    """Variable other than theta1/theta2, or an unknown function name."""

    def __init__(self, name, offset):
        super().__init__(f"unknown identifier {name!r} (at offset {offset})")
        self.name = name
        self.offset = offset


class DomainError(BnecertError):
    """Evaluation left the real domain (log/sqrt of a negative, x/0, ...)."""


class NegativePrior(BnecertError):
    """Prior density is negative at a validation grid point."""


class ZeroMarginal(BnecertError):
    """A marginal density is zero or negative where positivity is required."""


class NonFinite(BnecertError):
    """An expression evaluated to NaN or infinity on the validation grid."""


class QuadratureFailure(BnecertError):
    """Adaptive quadrature could not reach the tolerance within its budget."""


class Prop1Violation(BnecertError):
    """User-supplied multipliers fail the linearization identity on the grid."""


class Infeasible(BnecertError):
    """Simplex found the LP infeasible (indicates a construction bug)."""


class UnboundedObjective(BnecertError):
    """Simplex found the LP unbounded (indicates a construction bug)."""


class SimplexStall(BnecertError):
    """Simplex hit its pivot cap before reaching optimality."""


class NoConvergence(BnecertError):
    """Fictitious play missed the target gap; carries the best iterate."""

    def __init__(self, result):
        g = max(result.finite_gap1, result.finite_gap2)
        super().__init__(f"fictitious play stopped with best gap {g:.3e}")
        self.result = result


class TooLarge(BnecertError):
    """Enumeration guard tripped: the pure-profile space is too big."""


class EquilibriumNotFound(BnecertError):
    """Neither pure enumeration nor support enumeration found an equilibrium."""


class UnknownAction(BnecertError):
    """Action label not present in the strategy."""


class AllLevelsFailed(BnecertError):
    """Every discretization level in a run failed with an error."""

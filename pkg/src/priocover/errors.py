"""Exception types shared across the package."""


class PriocoverError(Exception):
    """Base class for all library errors."""


class ValidationError(PriocoverError):
    """Malformed instance, document, or argument."""


class DimensionMismatch(ValidationError):
    """Solution length does not match the instance's column count."""


class Infeasible(PriocoverError):
    """No feasible solution exists for the given instance."""

    def __init__(self, message="infeasible", uncovered=None):
        super().__init__(message)
        # row/edge indices that cannot be covered, when known
        self.uncovered = tuple(uncovered) if uncovered is not None else ()


class FractionalInfeasible(PriocoverError):
    """A fractional witness required by a rounding step is not feasible.

    Signals an upstream bug rather than a property of the input.
    """


class NonIntegralVertex(PriocoverError):
    """The LP vertex expected to be integral is not.

    For the totally unimodular line-cover oracle this means the input
    matrix was not interval structured.
    """

    def __init__(self, message, solution=None):
        super().__init__(message)
        self.solution = solution


class AssumptionViolated(PriocoverError):
    """The weak supply assumption A_ij * s_j <= b_i fails somewhere."""

    def __init__(self, offending):
        pairs = tuple(offending)
        super().__init__(
            "supply exceeds demand at (row, col): %s" % (list(pairs),)
        )
        self.offending = pairs


class CertificateViolated(PriocoverError):
    """A certificate that is guaranteed by theory failed to verify."""


class BudgetExceeded(PriocoverError):
    """Brute-force search ran past its node budget."""

    def __init__(self, budget):
        super().__init__("search exceeded %d nodes" % budget)
        self.budget = budget


class IterationBudgetExceeded(PriocoverError):
    """Constraint generation failed to stabilize within the iteration cap."""

    def __init__(self, cap):
        super().__init__("constraint generation did not converge in %d rounds" % cap)
        self.cap = cap

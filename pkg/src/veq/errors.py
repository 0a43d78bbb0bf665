"""Error types shared across the package.

Exit-code mapping for the CLI lives in veq.cli; here we only distinguish
user-facing input problems from broken internal invariants.
"""


class VeqError(Exception):
    """Base class for all structured errors raised by this package."""


class NotParallel(VeqError):
    """Two morphisms that must share source and target do not."""


class EmptyList(VeqError):
    """An operation that needs at least one input got none."""


class CodMismatch(VeqError):
    """Morphisms were expected to share a codomain."""


class DomainMismatch(VeqError):
    """Objects or domains that must coincide differ."""


class TargetMismatch(VeqError):
    """A candidate's target does not match the required object."""


class SourceMismatch(VeqError):
    """A candidate's source does not match the required object."""


class CapabilityMissing(VeqError):
    """The category instance does not provide a needed construction."""

    def __init__(self, capability: str, category: str = "?"):
        self.capability = capability
        self.category = category
        super().__init__(f"category {category!r} lacks capability {capability!r}")


class BudgetInvalid(VeqError):
    """A search budget was non-positive or malformed."""


class SignatureMismatch(VeqError):
    """A term uses a symbol or arity the signature does not declare."""


class UnboundVariable(VeqError):
    """Term evaluation hit a variable the environment does not cover."""


class ElementNotInG(VeqError):
    """A named element is not in the group's carrier."""


class CarrierTooLarge(VeqError):
    """A carrier exceeds the configured enumeration bound."""


class BoundsTooLarge(VeqError):
    """A requested construction exceeds the configured size bound."""


class BoundTooLarge(BoundsTooLarge):
    """Alias kept separate so call sites can name the single-bound case."""


class PrecisionExhausted(VeqError):
    """A series operation needs more known coefficients than available."""


class AllZeroCoefficients(VeqError):
    """A recurrence coefficient vector must have a nonzero entry."""


class InternalEquivalenceViolation(VeqError):
    """Two routes that are provably equal disagreed; an implementation bug."""


class DepthTooSmall(VeqError):
    """A truncated free construction was probed beyond its depth."""


class AdjunctionInvalid(VeqError):
    """Functors and transformations fail the triangle identities."""


class ParseError(VeqError):
    """Workspace or term text failed to parse; carries a position."""

    def __init__(self, message: str, line: int = 0, column: int = 0):
        self.line = line
        self.column = column
        super().__init__(f"{line}:{column}: {message}" if line else message)


class ResolutionError(VeqError):
    """A workspace command referenced a name that is not defined."""


class InvariantError(VeqError):
    """A loaded definition failed its validation checks."""

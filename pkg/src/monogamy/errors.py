"""Error types shared across the package.

All of them subclass ValueError so plain ``except ValueError`` keeps working;
the CLI maps any of these to exit code 1.
"""


class DimensionError(ValueError):
    """Matrix or subsystem dimensions do not match what an operation requires."""


class NotPsdError(ValueError):
    """An operator expected to be positive semi-definite has a negative eigenvalue
    below the tolerance floor."""


class ValidationError(ValueError):
    """A structured object (POVM, density matrix, permutation set, fixture, ...)
    violates one of its invariants."""


class DomainError(ValueError):
    """A scalar parameter lies outside the domain an operation is defined on."""


class CapacityError(ValueError):
    """A request exceeds the desk-scale capacity guard of an exact evaluator."""

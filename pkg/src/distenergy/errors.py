"""Exception types shared across modules.

The CLI maps them to exit codes: CapacityError -> 3, DomainError and
PoleError -> 4.
"""


class DistEnergyError(Exception):
    pass


class DomainError(DistEnergyError, ValueError):
    """Input outside the mathematical domain of an operation."""


class PoleError(DomainError):
    """Evaluation point too close to a pole or excluded neighbourhood."""


class CapacityError(DistEnergyError):
    """Requested size exceeds the configured memory budget."""

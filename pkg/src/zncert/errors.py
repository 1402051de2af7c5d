"""Shared exception types."""


class CapacityError(RuntimeError):
    """A dense or exhaustive operation would exceed its desk-scale guard."""


class StructureError(ValueError):
    """An input set lacks the algebraic structure the operation requires."""

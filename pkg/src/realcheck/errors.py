"""Exception types shared across the library."""


class StructureError(ValueError):
    """Malformed input structure (dangling references, non-total tables, ...)."""

    def __init__(self, message, *, source=None, field=None):
        self.source = source
        self.field = field
        prefix = ""
        if source is not None:
            prefix += f"{source}: "
        if field is not None:
            prefix += f"field {field!r}: "
        super().__init__(prefix + message)


class ConstructionError(RuntimeError):
    """A derived object (sequence kit, Krivine structure, ...) could not be built."""


class CapExceeded(RuntimeError):
    """An enumeration refused to run because it would exceed its configured cap."""

    def __init__(self, what, count, cap):
        self.what = what
        self.count = count
        self.cap = cap
        super().__init__(f"{what}: {count} items exceeds cap {cap}")


class InvariantViolation(AssertionError):
    """Two computations that are provably equivalent disagreed; surfaced loudly."""

"""Exception types shared across the package."""


class InvalidDimensionsError(ValueError):
    """Grid extents are zero, negative, or exceed implementation capacity."""


class DimensionalityError(ValueError):
    """An operation received a grid of the wrong dimensionality."""


class FormatError(ValueError):
    """A byte stream violates one of the file formats.

    ``field`` names the offending header field where known, ``offset`` the
    byte position at which decoding failed.
    """

    def __init__(self, message, field=None, offset=None):
        self.field = field
        self.offset = offset
        parts = [message]
        if field is not None:
            parts.append(f"field={field}")
        if offset is not None:
            parts.append(f"offset={offset}")
        super().__init__("; ".join(parts))


class ConsistencyError(RuntimeError):
    """An internal exactness invariant failed (e.g. a non-integer chi)."""


class CalibrationError(ConsistencyError):
    """The coefficient system is inconsistent, which signals a counting bug."""

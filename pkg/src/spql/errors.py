"""Exception types shared across the package."""


class SpqlError(Exception):
    """Base class for all package-specific errors."""


class DimensionError(SpqlError):
    """Operands have incompatible or invalid dimensions."""


class PrecisionOverflow(SpqlError):
    """Requested fixed-point precision exceeds the supported envelope."""


class StreamFormatError(SpqlError):
    """A proof stream is malformed (bad magic, truncation, out-of-range mantissa, ...).

    The verifier maps this to an ABORT verdict; it never escapes a
    verification as a crash.
    """


class InsufficientRandomness(SpqlError):
    """A finite bit source ran out of bits."""

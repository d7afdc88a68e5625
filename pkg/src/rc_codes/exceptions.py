"""
Exceptions raised by the rc_codes library
"""


class RingCodesError(Exception):
    """Base class for every error raised by rc_codes"""


class DomainError(RingCodesError, ValueError):
    """A symbol, matrix entry or ring lies outside its allowed range"""


class DimensionMismatchError(RingCodesError, ValueError):
    """An info word or column does not match the generator dimensions"""


class EnumerationCapError(RingCodesError):
    """Exhaustive enumeration refused because 2^K exceeds the configured cap"""

    def __init__(self, size: int, cap: int):
        self.size = size
        self.cap = cap
        super().__init__(
            f"exhaustive enumeration of {size} info words exceeds the cap of {cap}"
        )


class PreconditionError(RingCodesError):
    """An operation was called on an input that violates its precondition"""


class HexFormatError(RingCodesError, ValueError):
    """Malformed hexadecimal generator-matrix document"""


class ConfigurationError(RingCodesError, ValueError):
    """Inconsistent build or simulation configuration"""


class ExpectedTableError(RingCodesError, ValueError):
    """Malformed table of expected appendix milestones"""

"""Error types shared across the library.

Every rejection carries a dedicated class so callers (and the CLI) can map
failures to stable names.  All of them derive from ShiftGroupsError.
"""


class ShiftGroupsError(Exception):
    """Base class for all library errors."""


# --- matrix / space validation ---

class NotSquare(ShiftGroupsError):
    pass


class NotZeroOne(ShiftGroupsError):
    pass


class EmptyRowOrColumn(ShiftGroupsError):
    pass


class Reducible(ShiftGroupsError):
    pass


class Permutation(ShiftGroupsError):
    pass


# --- arithmetic ---

class Overflow(ShiftGroupsError):
    """A computation left the signed 64-bit range; results are never wrapped."""


# --- words and step functions ---

class InadmissibleWord(ShiftGroupsError):
    pass


class MissingWord(ShiftGroupsError):
    pass


class DuplicateWord(ShiftGroupsError):
    pass


class NegativeExponent(ShiftGroupsError):
    pass


# --- table homeomorphisms ---

class SrcNotPartition(ShiftGroupsError):
    pass


class DstNotPartition(ShiftGroupsError):
    pass


class FollowerMismatch(ShiftGroupsError):
    pass


class BadSymbols(ShiftGroupsError):
    pass


class SpecMismatch(ShiftGroupsError):
    pass


# --- orbit-equivalence witnesses ---

class NotPartition(ShiftGroupsError):
    pass


class JunctionInadmissible(ShiftGroupsError):
    pass


class InverseInvalid(ShiftGroupsError):
    pass


class StageMismatch(ShiftGroupsError):
    pass


class BoundExceeded(ShiftGroupsError):
    pass


class DepthCapExceeded(ShiftGroupsError):
    pass


class NotGammaScoe(ShiftGroupsError):
    pass


class IdentityElement(ShiftGroupsError):
    """Raised when an operation requires a non-identity element."""


class BadArgument(ShiftGroupsError):
    """A precondition on an argument was violated."""


# --- file parsing ---

class ParseError(ShiftGroupsError):
    pass


_I64_MIN = -(2 ** 63)
_I64_MAX = 2 ** 63 - 1


def checked_i64(value: int) -> int:
    """Return ``value`` unchanged if it fits a signed 64-bit integer."""
    if value < _I64_MIN or value > _I64_MAX:
        raise Overflow(f"integer {value} exceeds the signed 64-bit range")
    return value

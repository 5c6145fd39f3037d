"""
fb/core/errors.py
─────────────────
Exception hierarchy for the algebra engine.  Everything raised on purpose
derives from BurnsideError so the CLI boundary can map it to an exit code.
"""


class BurnsideError(Exception):
    """Base class for every deliberate engine failure."""


class GroupError(BurnsideError):
    """Malformed group input: bad table, bad generators, singular matrix."""


class CapExceeded(BurnsideError):
    """A size cap was hit before the computation could start."""

    def __init__(self, what: str, size: int, cap: int):
        super().__init__(f"{what}: size {size} exceeds cap {cap}")
        self.what = what
        self.size = size
        self.cap = cap


class PreconditionError(BurnsideError):
    """An operation was called outside its domain (not Sylow, not normal…)."""


class NotIntegral(BurnsideError):
    """A mark vector is not the ghost image of a Burnside-ring element."""

    def __init__(self, class_index: int, message: str | None = None):
        super().__init__(message or f"marks not integral at class {class_index}")
        self.class_index = class_index


class StabilityRequired(BurnsideError):
    """An element had to be F-stable and is not."""


class BisetPayloadError(BurnsideError):
    """A ghost vector does not match the source group of a biset map."""


class ConsistencyError(BurnsideError):
    """Two independent computations of the same object disagree."""


class DescriptorError(BurnsideError):
    """User input (descriptor, label, expression) could not be parsed."""

"""Exception hierarchy shared by all modules."""


class CredalError(Exception):
    """Base class for library errors."""


class ValidationError(CredalError, ValueError):
    """Malformed input: bad weights, sizes, ranges."""


class FrameMismatchError(ValidationError):
    """Two objects that must share a frame do not."""


class NullEventError(CredalError):
    """Conditioning on an event of probability zero."""


class EmptySetError(CredalError):
    """An operation that needs a non-empty knowledge set got an empty one."""


class TotalConflictError(CredalError):
    """Dempster's rule with conflict equal to one."""

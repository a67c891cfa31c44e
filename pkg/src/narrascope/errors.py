"""Exception hierarchy shared across the pipeline.

Everything raised here signals a problem with the caller's input or
request, as opposed to an internal bug; the CLI maps these to exit
code 1 and anything else to exit code 2.
"""


class NarrascopeError(Exception):
    """Base class for all user-facing errors."""


class NoScenesFound(NarrascopeError):
    """No scene heading matched; the input is not screenplay-formatted."""


class EmptyDocument(NarrascopeError):
    """The input has no non-whitespace content."""


class DegenerateMatrix(NarrascopeError):
    """Fewer than 2 usable rows or 2 usable columns survive."""


class ZeroProfile(NarrascopeError):
    """A supplementary profile sums to zero and cannot be normalized."""


class TooShort(NarrascopeError):
    """The segment sequence is too short for the requested statistic."""


class NoCommonSegments(NarrascopeError):
    """Two factor configurations share no segment ordinals."""


class RankTooLow(NarrascopeError):
    """The factor model has fewer axes than the operation needs."""

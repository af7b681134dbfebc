"""Exception hierarchy.

Every error raised on purpose by this package derives from :class:`HoscError`.
Errors caused by bad input values also derive from :class:`ValueError` so they
behave the way scikit-learn users expect.
"""


class HoscError(Exception):
    """Base class for all package errors."""


# graph / io
class ParseError(HoscError, ValueError):
    def __init__(self, message, line=None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class DuplicateEdge(ParseError):
    pass


class SelfLoop(ParseError):
    pass


class NonPositiveWeight(ParseError):
    pass


class EmptyGraph(HoscError, ValueError):
    pass


class InvalidGraph(HoscError, ValueError):
    """Adjacency matrix is not square, symmetric, non-negative or hollow."""


# model
class InvalidParam(HoscError, ValueError):
    pass


class LabelMismatch(HoscError, ValueError):
    pass


class UnsupportedForm(HoscError, ValueError):
    """No closed form exists for the requested connectivity structure."""


class Unbalanced(HoscError, ValueError):
    pass


class RankDeficient(HoscError, ValueError):
    pass


# motif
class TooLarge(HoscError, ValueError):
    pass


# spectral
class NotSymmetric(HoscError, ValueError):
    pass


class KOutOfRange(HoscError, ValueError):
    pass


class DegeneratePoints(HoscError, ValueError):
    pass


# metrics
class LengthMismatch(HoscError, ValueError):
    pass


class KMismatch(HoscError, ValueError):
    pass


class ZeroWeight(HoscError, ValueError):
    pass


class EmptyCluster(HoscError, ValueError):
    pass


class ShapeMismatch(HoscError, ValueError):
    pass


# harness
class ConfigError(HoscError, ValueError):
    def __init__(self, message, path=None):
        self.path = path
        if path:
            message = f"{path}: {message}"
        super().__init__(message)


class EmptyResult(HoscError, ValueError):
    pass

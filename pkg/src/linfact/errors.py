"""Exception hierarchy shared by the compiled core and the pure-Python fallback."""


class LinfactError(Exception):
    """Base class for all validation errors raised by linfact."""


class UnknownSymbol(LinfactError, KeyError):
    pass


class DepthOutOfRange(LinfactError, IndexError):
    pass


class NotAncestor(LinfactError, ValueError):
    pass


class AlreadyMarked(LinfactError, ValueError):
    pass


class AncestorClosednessViolation(LinfactError, ValueError):
    pass


class MalformedFactorization(LinfactError, ValueError):
    pass


class EmptySet(LinfactError, ValueError):
    pass


class CSTError(LinfactError, ValueError):
    """Invalid common-suffix trie; ``line`` is the 1-based source line when known."""

    def __init__(self, message, line=None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class CSTSyntaxError(CSTError):
    pass


class DuplicateSiblingLabel(CSTError):
    pass


class OrphanNode(CSTError):
    pass


class NonSentinelRootEdge(CSTError):
    pass


class MisplacedSentinel(CSTError):
    pass


class CycleDetected(CSTError):
    pass


class FormatError(LinfactError, ValueError):
    def __init__(self, message, line=None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class InvariantViolation(LinfactError, AssertionError):
    """An internal engine invariant failed under debug assertions."""

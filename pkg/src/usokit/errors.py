"""Exception hierarchy shared by all usokit modules."""


class UsoError(ValueError):
    pass


class NotAUso(UsoError):
    pass


class NotPMatrix(UsoError):
    pass


class NotSpd(UsoError):
    pass


class NotGeneric(UsoError):
    """A free LCP coordinate vanished, so the orientation is undefined."""

    def __init__(self, vertex: int, index: int):
        self.vertex = vertex
        self.index = index
        super().__init__(f"q is not generic: coordinate {index} vanishes at vertex mask {vertex}")


class SingularMatrix(UsoError):
    pass


class ZeroPivot(UsoError):
    pass


class DimensionTooLarge(UsoError):
    pass


class DimensionMismatch(UsoError):
    pass


class InvalidMatching(UsoError):
    pass


class InvalidPermutation(UsoError):
    pass


class MalformedFace(UsoError):
    pass


class PreconditionFailed(UsoError):
    pass


class BudgetExceeded(UsoError):
    pass


class FormatError(UsoError):
    def __init__(self, message: str, line: int | None = None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)

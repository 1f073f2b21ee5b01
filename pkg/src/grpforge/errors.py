class GrpforgeError(Exception):
    pass


class SearchBoundExceeded(GrpforgeError):
    """A group or search is larger than the configured bound."""


class SearchTimeout(GrpforgeError):
    pass


class InvalidAction(GrpforgeError):
    """An action map is not an automorphism or not a homomorphism."""


class NotNormalized(GrpforgeError):
    """An automorphism does not map the given normal subgroup to itself."""


class GroupSpecError(GrpforgeError):
    def __init__(self, msg: str, line: int | None = None, col: int | None = None):
        self.line = line
        self.col = col
        where = f" at line {line}, column {col}" if line is not None else ""
        super().__init__(f"{msg}{where}")

"""Exception types shared across the package."""


class DomainError(ValueError):
    """Input violates a documented precondition."""


class ResourceError(RuntimeError):
    """Requested computation exceeds its enumeration or size budget."""


class InvariantError(RuntimeError):
    """An internal consistency check failed; indicates a bug."""


class ParseError(ValueError):
    def __init__(self, message, line=None, path=None):
        self.line = line
        self.path = path
        where = ""
        if path is not None:
            where += f"{path}:"
        if line is not None:
            where += f"{line}: "
        elif where:
            where += " "
        super().__init__(where + message)

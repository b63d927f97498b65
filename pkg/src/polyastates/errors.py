"""Exception types shared across the package."""


class DomainError(ValueError):
    """An argument lies outside the domain where an operation is defined.

    ``tag`` carries a short machine-readable reason (for example
    ``"BS-degenerate"``) so callers can distinguish singular cases.
    """

    def __init__(self, message: str, tag: str | None = None):
        super().__init__(message)
        self.tag = tag

"""Exception types shared across the toolkit."""


class QpmsError(Exception):
    """Base class for all errors raised by this package."""


class BadParams(QpmsError):
    """A parameter tuple violates an instance or operation invariant."""


class BadStart(BadParams):
    """A start vector entry is outside the valid window range."""


class UnknownSymbol(QpmsError):
    """A character in the input is not part of the alphabet."""

    def __init__(self, position: int, char: str, context: str = ""):
        self.position = position
        self.char = char
        where = f" in {context}" if context else ""
        super().__init__(f"unknown symbol {char!r} at position {position}{where}")


class MalformedFasta(QpmsError):
    """FASTA input does not start with a header record."""


class LengthMismatch(QpmsError):
    """Two strings that must have equal length do not."""


class BudgetExceeded(QpmsError):
    """An exhaustive enumeration would exceed its configured budget."""

    def __init__(self, required: int, budget: int, what: str = "enumeration"):
        self.required = required
        self.budget = budget
        super().__init__(f"{what} needs {required} candidates, budget is {budget}")

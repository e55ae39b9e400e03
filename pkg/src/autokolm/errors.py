"""Exception types shared across the package."""


class ContractError(ValueError):
    """A caller violated an operation's precondition (bad arity, bad index, ...)."""


class InputRejected(ValueError):
    """An input word uses symbols outside the declared alphabet."""


class BudgetExceeded(RuntimeError):
    """An enumeration or search outgrew its configured resource budget."""

    def __init__(self, message: str, budget: int):
        super().__init__(f"{message} (budget: {budget})")
        self.budget = budget


class FormatError(ValueError):
    """A text file does not conform to the expected line format."""

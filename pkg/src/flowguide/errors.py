"""Exception types shared across the toolkit."""


class NetworkError(ValueError):
    """Raised when a flow network fails structural validation."""


class InfeasibleFlowError(ValueError):
    """Raised when a flow violates capacity or conservation constraints."""


class FormatError(ValueError):
    """Raised when an input file cannot be parsed."""


class ContractError(ValueError):
    """Raised when an operation is invoked with arguments violating its contract."""

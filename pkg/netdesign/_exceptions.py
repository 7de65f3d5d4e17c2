from __future__ import annotations

__all__ = [
    "DatasetParseError",
    "DatasetValidationError",
    "DivergenceError",
    "DomainError",
    "EigensolverError",
    "NetDesignError",
    "NumericError",
    "OptimizerError",
    "ParameterError",
    "StrategyError",
    "TrainingError",
]


class NetDesignError(Exception):
    """Base class of every error raised by netdesign."""


class ParameterError(NetDesignError, ValueError):
    """An argument or config value is outside its valid range."""


class DomainError(NetDesignError, ValueError):
    """The input is well-formed but the operation is undefined for it (e.g. a disconnected graph)."""


class NumericError(NetDesignError, ArithmeticError):
    pass


class EigensolverError(NumericError):
    def __init__(self, msg: str, sweeps: int):
        super().__init__(msg)
        self.sweeps = sweeps


class DivergenceError(NumericError):
    def __init__(self, msg: str, step: int):
        super().__init__(msg)
        self.step = step


class DatasetParseError(NetDesignError, ValueError):
    def __init__(self, msg: str, line_number: int | None = None):
        if line_number is not None:
            msg = f"line {line_number}: {msg}"
        super().__init__(msg)
        self.line_number = line_number


class DatasetValidationError(DatasetParseError):
    """A dataset file parses but violates an invariant (e.g. J outside [0, 1])."""


class StrategyError(NetDesignError):
    def __init__(self, msg: str, loss_trace: list[float] | None = None):
        super().__init__(msg)
        self.loss_trace = loss_trace or []


class TrainingError(NetDesignError):
    def __init__(self, msg: str, epoch: int, loss_trace: list[float] | None = None):
        super().__init__(msg)
        self.epoch = epoch
        self.loss_trace = loss_trace or []


class OptimizerError(NetDesignError):
    pass

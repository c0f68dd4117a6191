"""Exception hierarchy.

Two families: precondition failures (bad input, CLI exit code 2) and
computational failures (the numerics could not deliver a certified value,
CLI exit code 3).
"""


class PintzError(Exception):
    exit_code = 3


class PreconditionError(PintzError, ValueError):
    exit_code = 2


class ComputationError(PintzError, ArithmeticError):
    exit_code = 3


class DomainError(PreconditionError):
    pass


class InvalidParams(PreconditionError):
    pass


class YTooSmall(PreconditionError):
    pass


class IncompletePrimes(PreconditionError):
    pass


class TailDivergence(PreconditionError):
    pass


class UsageError(PreconditionError):
    pass


class ConfigParseError(PreconditionError):
    def __init__(self, message: str, line: int | None = None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class CheckpointCorrupt(ComputationError):
    pass


class CancellationUnderflow(ComputationError):
    pass


class ConvergenceFailure(ComputationError):
    pass


class QuadratureFailure(ComputationError):
    pass


class NoExclusion(ComputationError):
    pass

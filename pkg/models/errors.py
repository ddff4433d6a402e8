"""Exception hierarchy shared by every pfkernel module."""


class PfKernelError(Exception):
    """Base class; ``kind`` is what the CLI and API report."""

    @property
    def kind(self) -> str:
        return type(self).__name__


class DimensionError(PfKernelError, ValueError):
    pass


class DomainError(PfKernelError, ValueError):
    pass


class SizeError(PfKernelError, ValueError):
    pass


class ConfigurationError(PfKernelError, ValueError):
    pass


class UnsupportedError(ConfigurationError):
    pass


class SingularityError(PfKernelError, ArithmeticError):
    pass


class DegeneracyError(PfKernelError, ArithmeticError):
    pass


class ConsistencyError(PfKernelError, ArithmeticError):
    pass


class NumericError(PfKernelError, ArithmeticError):
    def __init__(self, message: str, seed: int | None = None):
        super().__init__(message if seed is None else f"{message} (seed={seed})")
        self.seed = seed

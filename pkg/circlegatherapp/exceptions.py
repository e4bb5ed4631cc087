class GatherSimError(ValueError):
    """Base class for every error raised by the simulation framework."""


class AngleFormatError(GatherSimError):
    pass


class ConfigurationError(GatherSimError):
    pass


class AlgorithmError(GatherSimError):
    pass


class ContractViolation(GatherSimError):
    """
    Raised when a robot or a whole step breaks the model's contract.

    Attributes:
        step (int | None): Step index at which the violation was detected.
    """

    def __init__(self, message: str, step: int | None = None):
        super().__init__(message)
        self.step = step


class ImpossibilityError(GatherSimError):
    pass


class CertificateError(ImpossibilityError):
    """
    A certificate verification check failed.

    Attributes:
        failed (list[str]): Names of the checks that did not pass.
    """

    def __init__(self, message: str, failed: list[str] | None = None):
        super().__init__(message)
        self.failed = failed or []


class ForgeExhausted(ImpossibilityError):
    pass


class DerandomizationError(GatherSimError):
    pass


class SchedulerError(GatherSimError):
    pass

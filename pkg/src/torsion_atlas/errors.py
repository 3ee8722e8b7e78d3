"""Exception hierarchy shared by every module and mapped to CLI exit codes."""


class TorsionAtlasError(Exception):
    exit_code = 1


class BadInput(TorsionAtlasError, ValueError):
    exit_code = 5


class VerificationFailure(TorsionAtlasError):
    """An exact identity or certificate check did not hold."""

    exit_code = 2


class BudgetExceeded(TorsionAtlasError):
    exit_code = 3


class PrecisionExhausted(TorsionAtlasError):
    """Root isolation could not certify its output within the precision cap."""

    exit_code = 4

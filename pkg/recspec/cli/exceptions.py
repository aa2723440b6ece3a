from recspec.exceptions import RecspecError


class ConfigError(RecspecError):
    """Raised when a run configuration cannot be resolved."""

    code = "config_error"
    exit_status = 2

    def __init__(self, detail: str) -> None:
        super(ConfigError, self).__init__(detail)


class VerificationFailedError(RecspecError):
    """Raised when a verification run finds violations."""

    code = "verification_failed"

    def __init__(self, check: str, violations: int) -> None:
        super(VerificationFailedError, self).__init__(f"{check}: {violations} violations.")

class RecspecError(Exception):
    """Base for every error raised by recspec."""

    code: str = "recspec_error"
    exit_status: int = 3

    def __init__(self, detail: str) -> None:
        super(RecspecError, self).__init__(detail)
        self.detail = detail

    def as_record(self) -> dict:
        """
        Machine-readable form of the error.

        :return: dict with code, exit status and detail.
        """
        return {
            "error": self.code,
            "exit_status": self.exit_status,
            "detail": self.detail,
        }


class HorizonError(RecspecError):
    """Raised when a finite horizon is not long enough for a computation."""

    code = "horizon"
    exit_status = 4

"""Error hierarchy.

Every failure carries a stable machine-readable ``code`` string.  The CLI maps
exception classes to exit statuses: scenario/input problems exit 2, capacity
and rationality limits exit 3.  Refuted criteria are ordinary results, not
exceptions.
"""


class GaloisPointsError(Exception):
    """Base class; ``code`` identifies the failure kind."""

    def __init__(self, code, message, **details):
        self.code = code
        self.details = dict(details)
        super().__init__(f"{code}: {message}")


class InputError(GaloisPointsError):
    """Invalid or inconsistent input data (CLI exit 2)."""


class ToolLimitError(GaloisPointsError):
    """Sound but out of reach: caps, missing rationality, retries (exit 3)."""


class HardFailure(GaloisPointsError):
    """Internal consistency failure; indicates a bug upstream (exit 2)."""


def extension_required(message, degree):
    return ToolLimitError("EXTENSION_REQUIRED", message, degree=degree)

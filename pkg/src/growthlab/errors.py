"""Shared error type with machine-readable codes.

Every validation failure in the library raises GrowthLabError with a stable
``code`` string (for example ``RATIO_TOO_SMALL``); the CLI maps these to exit
code 2 and a JSON diagnostic on stderr.
"""


class GrowthLabError(ValueError):
    """Validation or domain error with a stable machine-readable code."""

    def __init__(self, code: str, message: str):
        self.code = code
        super().__init__(f"{code}: {message}")


def fail(code: str, message: str):
    raise GrowthLabError(code, message)

from typing import Optional, Sequence


class WbcdError(Exception):
    def __init__(self, details):
        self.details = details
        super().__init__(details)


class ConfigurationError(WbcdError):
    def __init__(self, details):
        super().__init__(details)


class DimensionError(WbcdError):
    def __init__(self, details, expected: Optional[int] = None, actual: Optional[int] = None):
        self.expected = expected
        self.actual = actual
        if expected is not None:
            details = f"{details} (expected {expected}, got {actual})"
        super().__init__(details)


class DataError(WbcdError):
    def __init__(self, details):
        super().__init__(details)


class ParseError(DataError):
    def __init__(self, details, line: Optional[int] = None):
        self.line = line
        if line is not None:
            details = f"line {line}: {details}"
        super().__init__(details)


class InternalError(WbcdError):
    def __init__(self, details):
        super().__init__(details)


class ScenarioError(WbcdError):
    """
    Wraps an error raised while running one matrix cell.
    """

    def __init__(self, details, cell: Sequence):
        self.cell = tuple(cell)
        super().__init__(f"[{'/'.join(str(c) for c in self.cell)}] {details}")


# errors that map to the usage/config exit code of the CLI
USAGE_ERRORS = (ConfigurationError,)

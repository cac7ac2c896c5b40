"""Exception types shared by every module.

Each error carries a stable ``name`` so the CLI can report it verbatim.
"""


class PrymCensusError(Exception):
    """Base class for domain errors (CLI exit status 1)."""

    @property
    def name(self):
        return type(self).__name__


class NotAnInvolution(PrymCensusError):
    def __init__(self, i, j, value):
        self.i, self.j, self.value = i, j, value
        expected = 1 if i == j else 0
        super().__init__(
            f"T*T has entry {value} at ({i}, {j}); expected {expected}"
        )


class InternalInconsistency(PrymCensusError):
    """Two independent routes disagreed. Always an implementation bug."""


class RankGuardExceeded(PrymCensusError):
    def __init__(self, what, value, limit):
        self.what, self.value, self.limit = what, value, limit
        super().__init__(f"{what} = {value} exceeds guard {limit}")


class AdjointnessViolation(PrymCensusError):
    pass


class InvalidCurveData(PrymCensusError):
    pass


class MalformedInput(Exception):
    """Input does not parse against the documented schema (CLI exit status 2)."""

    def __init__(self, message, offset=None):
        self.offset = offset
        if offset is not None:
            message = f"{message} (at byte offset {offset})"
        super().__init__(message)

    @property
    def name(self):
        return "MalformedInput"

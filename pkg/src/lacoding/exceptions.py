"""Exception types raised across the package."""


class TopologyError(ValueError):
    """Malformed or inconsistent topology description."""


class SingularMatrixError(ValueError):
    """A GF(2) system has no unique solution."""


class AllocationError(ValueError):
    """A shared-transmitter allocation violates its constraints."""


class EnumerationBoundError(ValueError):
    """An exhaustive enumeration would exceed its desk-scale bound."""


class InfeasibleMessageError(RuntimeError):
    """No codeword reproduces the requested message at every receiver.

    Raised by the joint-rate encoders when the level search is exhausted.
    The offending message is kept on ``message``.
    """

    def __init__(self, message, detail=""):
        self.message = tuple(message)
        text = f"no codeword realizes message {self.message}"
        if detail:
            text = f"{text}: {detail}"
        super().__init__(text)

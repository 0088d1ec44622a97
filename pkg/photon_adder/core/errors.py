"""Exception hierarchy shared by the library, the CLI and the HTTP surface."""

from __future__ import annotations


class PhotonAdderError(Exception):
    """Base class; ``exit_code`` is what the CLI returns for it."""

    exit_code = 2


class ConfigError(PhotonAdderError, ValueError):
    exit_code = 1


class NumericError(PhotonAdderError):
    exit_code = 2


class DomainError(NumericError, ValueError):
    """Argument outside the region where an operation is defined."""


class CutoffExceededError(NumericError):
    """A Fock cutoff (or Hermite degree) would exceed its configured cap."""


class ConvergenceError(NumericError):
    """A series did not reach its tolerance within the allowed terms."""


class DegenerateStateError(NumericError):
    """The conditional state is undefined because its norm vanishes."""


class ZeroProbabilityError(NumericError):
    """A measurement outcome has probability zero."""


class NoMaximumError(NumericError):
    """No positive stationary point exists for the requested maximization."""


class VerificationFailed(PhotonAdderError):
    """One or more verification checks failed; ``results`` holds the full report."""

    exit_code = 3

    def __init__(self, message: str, results: list | None = None) -> None:
        super().__init__(message)
        self.results = results or []

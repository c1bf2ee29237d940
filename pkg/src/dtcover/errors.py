"""
Exception hierarchy for the dtcover package.

Every error raised by the engine derives from ``DtCoverError``. Each class
also inherits the closest builtin exception, so code written against plain
``ValueError`` / ``KeyError`` keeps catching them.
"""


class DtCoverError(Exception):
    """Base class of all dtcover errors."""


class DuplicateKeyError(DtCoverError, ValueError):
    """A registry key was registered twice."""


class ContextError(DtCoverError, ValueError):
    """Two series (or tables) live on different graphs or truncations."""


class SeriesDomainError(DtCoverError, ValueError):
    """log/exp applied outside its domain (wrong constant term)."""


class GraphDomainError(DtCoverError, ValueError):
    """A graph operation received a graph or class it is not defined on."""


class ConfigurationError(DtCoverError, ValueError):
    """Invalid configuration: malformed input file or H-degree violation."""


class UnsupportedError(DtCoverError, ValueError):
    """The request lies outside what the engine can compute or prove."""


class MissingDataError(DtCoverError, KeyError):
    """A table has no value for a class that is needed."""

    def __str__(self) -> str:
        # KeyError quotes its argument; keep messages readable
        return str(self.args[0]) if self.args else ""


class MissingBaseError(MissingDataError):
    """A tree base case has no closed form and no user-supplied value."""


class ReductionError(DtCoverError, RuntimeError):
    """The cover reduction failed to decrease (l, g); indicates a bug."""

"""Exception hierarchy.

Axiom failures are *not* exceptions: validators return a
:class:`~trusslab.report.ValidationReport`.  Exceptions are reserved for
malformed input, violated preconditions, exhausted budgets and internal
consistency traps.
"""


class TrussLabError(Exception):
    """Base class for every error raised by the package."""


class StructureError(TrussLabError, ValueError):
    """A table has the wrong shape or an entry outside the carrier."""


class InvalidStructure(TrussLabError, ValueError):
    """An input that must satisfy some laws does not.

    ``report`` carries the failing :class:`ValidationReport`.
    """

    def __init__(self, what, report):
        super().__init__(f"invalid {what}: {report.describe()}")
        self.what = what
        self.report = report


class PreconditionError(TrussLabError):
    """A theorem engine was handed an input outside its hypotheses.

    ``name`` identifies the failed obligation (a row, column, square, ...).
    """

    def __init__(self, name, message, witness=None):
        super().__init__(f"{name}: {message}")
        self.name = name
        self.witness = witness


class HypothesisError(PreconditionError):
    """An explicit hypothesis of a factorisation/exactness statement fails."""


class BudgetExceeded(TrussLabError):
    """An exhaustive search would exceed its configured budget."""


class ConsistencyError(TrussLabError, AssertionError):
    """Two routes that must agree did not; indicates a bug or a false claim."""


class LoadError(TrussLabError):
    """Base class for problems reading a structure file."""


class ParseError(LoadError):
    """The file is not valid JSON."""


class UnknownKindError(LoadError):
    """The document's ``kind`` is not one we know how to build."""


class PropertyFalsified(TrussLabError):
    """A claimed structural property failed on a concrete instance.

    Distinct from :class:`ConsistencyError`: this is a counterexample to a
    statement being checked, reported with its ``witness``.
    """

    def __init__(self, message, witness=None):
        super().__init__(message)
        self.witness = witness

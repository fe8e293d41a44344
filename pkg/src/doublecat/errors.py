"""Exception hierarchy.

Validators never raise for axiom failures; they return a
:class:`~doublecat.report.DiagnosticReport`. Exceptions are reserved for
malformed requests (unknown ids, ill-typed compositions, size caps).
"""


class DcatError(Exception):
    """Base class for every error raised by this package."""


class UnknownArrow(DcatError, KeyError):
    def __init__(self, arrow, where=None):
        self.arrow = arrow
        self.where = where
        super().__init__(f"unknown arrow {arrow!r}" + (f" in {where}" if where else ""))

    def __str__(self):
        return self.args[0]


class UnknownObject(DcatError, KeyError):
    def __init__(self, obj, where=None):
        self.obj = obj
        self.where = where
        super().__init__(f"unknown object {obj!r}" + (f" in {where}" if where else ""))

    def __str__(self):
        return self.args[0]


class NotComposable(DcatError, ValueError):
    def __init__(self, first, second, detail="", position=None):
        self.first = first
        self.second = second
        self.position = position
        msg = f"{first!r} and {second!r} are not composable"
        if position is not None:
            msg += f" at grid position {position}"
        if detail:
            msg += f": {detail}"
        super().__init__(msg)


class NotComposableInP(NotComposable):
    """Raised by ``evaluate_in_P`` with the first offending pair of letters."""


class TypingMismatch(DcatError, ValueError):
    pass


class NotAGroupoid(DcatError, ValueError):
    pass


class SizeLimitExceeded(DcatError, ValueError):
    pass


class NotNormal(DcatError, ValueError):
    """A conjugate ``h^-1 m h`` escapes the would-be normal subgroup."""

    def __init__(self, h, m, conjugate, where=""):
        self.h = h
        self.m = m
        self.conjugate = conjugate
        super().__init__(
            f"not normal{' in ' + where if where else ''}: "
            f"{h}^-1 {m} {h} = {conjugate} is not in the subgroup"
        )


class SemicoreAxiomViolated(DcatError, ValueError):
    def __init__(self, message, witness=None, report=None):
        self.witness = witness
        self.report = report
        super().__init__(message)


class InterchangeFailure(DcatError, ValueError):
    """The two evaluation orders of a grid gave different squares."""

    def __init__(self, rows_first, cols_first):
        self.rows_first = rows_first
        self.cols_first = cols_first
        super().__init__(f"rows-first {rows_first} != columns-first {cols_first}")


class ParseError(DcatError, ValueError):
    def __init__(self, message, line=None, field=None):
        self.line = line
        self.field = field
        loc = []
        if line is not None:
            loc.append(f"line {line}")
        if field is not None:
            loc.append(f"field {field!r}")
        super().__init__(f"{message}" + (f" ({', '.join(loc)})" if loc else ""))


class ReferenceError(DcatError, LookupError):  # noqa: A001 - name is part of the file-format contract
    """A structure file refers to an id that does not exist or is mistyped."""

    def __init__(self, message, field=None):
        self.field = field
        super().__init__(message + (f" (field {field!r})" if field else ""))

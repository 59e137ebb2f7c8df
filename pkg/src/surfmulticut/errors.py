"""Exception types shared across the package."""


class MulticutError(Exception):
    """Base class for all package errors."""


class StructuralInputError(MulticutError):
    """A combinatorial map is malformed (dart missing, duplicated, ...)."""


class CurveError(MulticutError):
    """A curve's event list is inconsistent with the map it is drawn on."""


class TopologyError(MulticutError):
    """A candidate topology is structurally invalid for its disk schema."""


class SequenceError(MulticutError):
    """A crossing sequence is inconsistent with the disk schema."""


class ResourceGuardError(MulticutError):
    """An exact-search guard (instance size limit) was exceeded."""


class ParseError(MulticutError):
    """Instance text could not be parsed.

    Carries the 1-based line and column of the offending token and the
    name of the field being parsed, so errors are actionable.
    """

    def __init__(self, message, line=None, column=None, field=None):
        self.line = line
        self.column = column
        self.field = field
        loc = ""
        if line is not None:
            loc = f" (line {line}" + (f", col {column}" if column is not None else "") + ")"
        fld = f" [field: {field}]" if field else ""
        super().__init__(f"{message}{loc}{fld}")


class InternalInvariantError(MulticutError):
    """An internal soundness check failed; this indicates a bug, not bad input."""

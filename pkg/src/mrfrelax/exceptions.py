"""Exception and warning classes."""


class MrfError(ValueError):
    """Base class for invalid models, assignments and files."""


class DimensionMismatch(MrfError):
    pass


class NodeIndexOutOfRange(MrfError):
    pass


class DuplicateNodeInClique(MrfError):
    pass


class NonFiniteValue(MrfError):
    pass


class TensorTooLarge(MrfError):
    pass


class RepeatedMode(MrfError):
    pass


class NotPairwise(MrfError):
    pass


class SingularProbeSystem(MrfError):
    pass


class SearchSpaceTooLarge(MrfError):
    pass


class ParseError(MrfError):
    """Malformed model file. ``line`` is 1-based, or None when unknown."""

    def __init__(self, message, line=None):
        self.line = line
        super().__init__(f"line {line}: {message}" if line is not None else message)


class BadPreamble(ParseError):
    pass


class CountMismatch(ParseError):
    pass


class NonPositiveFactorValue(ParseError):
    pass


class SchemaVersionMismatch(MrfError):
    pass


class AllZeroPotentialsWarning(UserWarning):
    """Normalization was skipped because every potential is zero."""

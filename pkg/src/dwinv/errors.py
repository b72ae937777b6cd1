"""Exception hierarchy shared by all modules."""


class DWError(Exception):
    """Base class for every error raised by :mod:`dwinv`."""

    code = "error"


class InvalidGroup(DWError):
    code = "invalid_group"


class TooLarge(DWError):
    code = "too_large"


class ZeroDenominator(DWError, ZeroDivisionError):
    code = "zero_denominator"


class NoSolution(DWError):
    """No strongly normalized representative within the denominator cap."""

    code = "no_solution"


class NoTrivialization(DWError):
    code = "no_trivialization"


class NotCoprime(DWError):
    code = "not_coprime"


class ParseError(DWError):
    code = "parse_error"


class TopologyError(DWError):
    code = "topology_error"


class LabelMismatch(DWError):
    code = "label_mismatch"


class InternalError(DWError):
    code = "internal_error"


class CharacterizationFailure(DWError):
    """The solid-torus element z failed z^p = l, z^-q = m."""

    code = "characterization_failure"

"""Exception hierarchy shared across the package."""


class HeatAlignError(Exception):
    """Base class for all errors raised by heatalign."""


class GraphIntegrityError(HeatAlignError):
    """A fact graph violates a structural invariant."""


class NodeNotFoundError(HeatAlignError, KeyError):
    """A node id was not found in the graph."""


class AbsentAttributeError(HeatAlignError, LookupError):
    """An attribute value is absent from a frequency table."""


class ParseError(HeatAlignError):
    """A file could not be parsed."""


class ConfigError(HeatAlignError):
    """A pipeline or stage configuration is invalid."""


class EvalError(HeatAlignError):
    """An evaluation request is ill-posed (e.g. empty ground truth)."""

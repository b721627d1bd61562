"""Exception hierarchy shared by every bellfacts module."""


class BellFactsError(Exception):
    """Base class for all bellfacts errors."""


class InvalidInputError(BellFactsError, ValueError):
    """A state, angle, probability or target is malformed or out of range."""


class InvalidProtocolError(BellFactsError, ValueError):
    """A measurement protocol cannot produce the requested facts."""


class InvalidQuestionError(BellFactsError, ValueError):
    """A strategy was asked a question outside its protocol."""


class InvalidResolutionError(BellFactsError, ValueError):
    """A simplex grid resolution is not a positive integer."""


class InvalidConfigError(BellFactsError, ValueError):
    """A simulation configuration is unusable (e.g. zero runs)."""


class ConsistencyError(BellFactsError, RuntimeError):
    """An internal numerical invariant was violated beyond its tolerance."""

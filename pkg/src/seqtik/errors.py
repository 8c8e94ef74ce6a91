"""Exception hierarchy shared by all seqtik modules."""


class SeqtikError(Exception):
    """Base class for all errors raised by seqtik."""


class InvalidInputError(SeqtikError, ValueError):
    """A value violates the documented input contract (NaN, bad length, ...)."""


class DegenerateParametersError(SeqtikError, ValueError):
    """Index parameters collapse a formula (e.g. an exponent ratio 0/0)."""


class ParameterOrderError(SeqtikError, ValueError):
    """Index parameters violate a required ordering such as p <= q <= t."""


class NotSeparableError(SeqtikError, ValueError):
    """The misfit exponent differs from the image-space index, so the
    functional no longer splits into independent coordinates."""


class SolverError(SeqtikError, RuntimeError):
    """A 1-D minimization failed to converge.

    ``coordinate`` is the index of the offending coordinate (``None`` for a
    scalar call). Sweep drivers add ``delta`` and ``trial``.
    """

    def __init__(self, message, coordinate=None, delta=None, trial=None):
        super().__init__(message)
        self.coordinate = coordinate
        self.delta = delta
        self.trial = trial

    def to_dict(self):
        return {
            "error": type(self).__name__,
            "message": str(self),
            "coordinate": self.coordinate,
            "delta": self.delta,
            "trial": self.trial,
        }

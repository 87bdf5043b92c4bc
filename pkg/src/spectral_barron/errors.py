"""Exception hierarchy shared by all modules."""


class BarronError(Exception):
    """Base class for every error raised by :mod:`spectral_barron`."""


class GridError(BarronError, ValueError):
    """Invalid lattice parameters or incompatible lattices."""


class PreconditionError(BarronError, ValueError):
    """An operation was called outside its admissible parameter range.

    Keyword arguments are kept on ``details`` so callers (the CLI in
    particular) can report the offending quantities, e.g. a contraction
    constant.
    """

    def __init__(self, message, **details):
        super().__init__(message)
        self.details = details


class NotAContractionError(PreconditionError):
    """The fixed-point map has contraction constant >= 1."""


class SingularSystemError(BarronError, ArithmeticError):
    """A symbol vanishes on the lattice or a dense system is numerically singular."""

    def __init__(self, message, **details):
        super().__init__(message)
        self.details = details


class ConvergenceError(BarronError, RuntimeError):
    """An iteration or quadrature failed to reach its tolerance."""

    def __init__(self, message, **details):
        super().__init__(message)
        self.details = details


class CertificateError(BarronError, RuntimeError):
    """Input does not meet the accuracy needed to certify a bound."""

    def __init__(self, message, **details):
        super().__init__(message)
        self.details = details

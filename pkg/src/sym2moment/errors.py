"""Exception hierarchy shared by every layer of the package."""


class Sym2Error(Exception):
    """Base class for all errors raised by sym2moment."""


class PrecisionError(Sym2Error):
    """An approximation could not meet its error contract at the working precision."""


class PoleError(Sym2Error):
    """Evaluation requested at a pole."""


class DomainError(Sym2Error, ValueError):
    """Argument outside the documented domain."""


class ContourError(Sym2Error, ValueError):
    """Contour abscissa outside the admissible strip."""


class TailBoundError(Sym2Error):
    """A certified tail bound exceeds the requested tolerance."""


class NonConvergenceError(Sym2Error):
    """Successive refinements failed to agree."""


class TruncationError(Sym2Error):
    """A truncated series cannot be certified at the requested tolerance."""


class RepeatedEigenvalueError(Sym2Error):
    """Hecke eigenvalues collide, so eigenforms are not separated."""


class SingularSystemError(Sym2Error):
    """A linear system expected to be invertible is singular."""


class NegativeWeightError(Sym2Error):
    """A solved harmonic weight came out non-positive."""


class ConfigError(Sym2Error, ValueError):
    """Invalid run configuration."""

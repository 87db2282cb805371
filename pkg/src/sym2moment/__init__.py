"""First moment of the symmetric-square L-function at the centre over level-one eigenforms."""

__version__ = "0.1.0"

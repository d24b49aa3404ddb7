"""Shifted Ramanujan series for 1/pi: hypergeometric and modular evaluation,
lattice sums, closed forms and integer-relation recognition."""

from .arith import Precision

__version__ = "0.1.0"

__all__ = ["Precision", "__version__"]

"""Separable elements of free groups, the sep-norm and one-edge splittings."""

from .errors import InvalidInputError, PreconditionError, UndecidedError
from .words import CyclicWord, Word, parse

__version__ = "0.1.0"

__all__ = [
    "CyclicWord",
    "InvalidInputError",
    "PreconditionError",
    "UndecidedError",
    "Word",
    "parse",
    "__version__",
]

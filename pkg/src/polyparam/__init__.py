"""Polynomial parametrizations of sets of integer points, with independent verification."""

__version__ = "0.1.0"

from .polycore import Polynomial, PolyVector  # noqa: E402
from .param import ParamObject, Provenance  # noqa: E402

__all__ = ["Polynomial", "PolyVector", "ParamObject", "Provenance", "__version__"]

"""Numerical laboratory for the degenerate logistic equation with a moving
vanishing set: spectral thresholds, boundedness / grow-up criteria, and
desk-scale simulation cross-checks."""

__version__ = "0.1.0"

from .geometry import DomainSpec, SetShape  # noqa: F401
from .scenarios import registry  # noqa: F401

"""Certified Weierstrass, Serre and Liouville computations on ball arithmetic."""

from .errors import DomainError, ParseError, QEError
from .lattice import Lattice, make_lattice, preset
from .precision import Ordering, TowerMagnitude
from .weierstrass import evaluate, make_context, sigma, wp, wp_prime, zeta_w

__all__ = [
    "DomainError",
    "ParseError",
    "QEError",
    "Lattice",
    "make_lattice",
    "preset",
    "Ordering",
    "TowerMagnitude",
    "evaluate",
    "make_context",
    "sigma",
    "wp",
    "wp_prime",
    "zeta_w",
]

__version__ = "0.1.0"

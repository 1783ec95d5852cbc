"""Exact decision procedures for relative complete reducibility of finitely
generated matrix groups over Q, with respect to diagonal subtori, GL(U),
Sp(V), SO(V) and the 7-dimensional G2-module."""

__version__ = "0.1.0"

from .exactlin import RatMatrix, Rational, Subspace
from .flags import Flag, GradedDecomposition, GroupH
from .toruscr import CocharacterWitness, FlagType, TorusK

__all__ = [
    "RatMatrix",
    "Rational",
    "Subspace",
    "Flag",
    "GradedDecomposition",
    "GroupH",
    "CocharacterWitness",
    "FlagType",
    "TorusK",
]

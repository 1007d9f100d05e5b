"""Hypercyclicity, spectra and eigenvectors of banded Toeplitz operators on H^2."""

from .classifier import ClassifyOptions, Verdict, classify
from .operators import TruncatedToeplitz
from .symbol import LaurentSymbol, TridiagonalSymbol

__all__ = ["ClassifyOptions", "LaurentSymbol", "TridiagonalSymbol", "TruncatedToeplitz", "Verdict", "classify"]

"""Orthogonal polynomial sequences P_n^{g,h} and Turan inequality verification."""
from .arithfn import ALTSIGN, IDENTITY, ONE, SIGMA, ArithmeticFunctionSpec, parse_spec, power, table
from .polycore import GeneratedFamily, Poly, generate_convolution, generate_three_term
from .scalar import precision

__all__ = [
    "ALTSIGN",
    "IDENTITY",
    "ONE",
    "SIGMA",
    "ArithmeticFunctionSpec",
    "GeneratedFamily",
    "Poly",
    "generate_convolution",
    "generate_three_term",
    "parse_spec",
    "power",
    "precision",
    "table",
]

__version__ = "0.1.0"

"""Explicit two-sided lossless expanders from Ramanujan cubical complexes.

The pipeline runs quaternion arithmetic -> LPS Cayley graphs over PSL(2, q)
-> cubical complexes -> coded incidence graphs -> a small gadget -> the
tripartite line product, with empirical checks at every stage in
:mod:`expander_forge.verify`.
"""

from .codes import BinaryCode, hadamard
from .cubical import CubicalComplex, validate_generators
from .gadget import GadgetGraph, generate, generate_certified
from .lps import build_cayley, generator_set
from .numtheory import PrimeParams, find_modulus_prime
from .pipeline import Build, BuildConfig, ConfigError
from .product import ProductGraph, line_product
from .psl2 import PSL2Group

__version__ = "0.1.0"

__all__ = [
    "BinaryCode", "hadamard", "CubicalComplex", "validate_generators", "GadgetGraph", "generate",
    "generate_certified", "build_cayley", "generator_set", "PrimeParams", "find_modulus_prime",
    "Build", "BuildConfig", "ConfigError", "ProductGraph", "line_product", "PSL2Group",
]

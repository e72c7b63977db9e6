"""Exact p-adic valuations of lattice-walk counts and sums over abaci.

The main entry points are re-exported here; see the submodules for the
full interfaces.
"""

__version__ = "0.1.0"

from ._jit import backend
from .abacus import AbacusAlphabet, AbacusType, abacus_sum_direct, cf_type, enumerate_types, type_of
from .automaton import Automaton, dump, minimize, synthesize
from .errors import ResourceLimitError
from .numth import digit_sum, multinomial, multinomial_valuation, nu, theta
from .poly import Poly, SymPoly, parse_symmetric
from .reduction import Fold, reduce_letter, reduce_word
from .walks import abelian_square_count, theorem_check, walk_count, walk_valuation

__all__ = [
    "AbacusAlphabet",
    "AbacusType",
    "Automaton",
    "Fold",
    "Poly",
    "ResourceLimitError",
    "SymPoly",
    "abacus_sum_direct",
    "abelian_square_count",
    "backend",
    "cf_type",
    "digit_sum",
    "dump",
    "enumerate_types",
    "minimize",
    "multinomial",
    "multinomial_valuation",
    "nu",
    "parse_symmetric",
    "reduce_letter",
    "reduce_word",
    "synthesize",
    "theorem_check",
    "theta",
    "type_of",
    "walk_count",
    "walk_valuation",
]

"""octal: LTL model checking as graph classification.

A system given as a Buchi automaton and a specification given as an LTL formula
are joined into a single undirected graph; a graph neural network classifies
whether the system satisfies the specification.  A classical tableau-based
model checker ships alongside as labeling oracle, correctness reference, and
speed baseline.
"""

__version__ = "0.1.0"

from octal.ltl import Formula, GenConfig, parse_ltl, print_formula, random_formula, to_nnf
from octal.automata import Buchi, LassoWord, translate, holds, equivalent

__all__ = [
    "Buchi",
    "Formula",
    "GenConfig",
    "LassoWord",
    "__version__",
    "equivalent",
    "holds",
    "parse_ltl",
    "print_formula",
    "random_formula",
    "to_nnf",
    "translate",
]

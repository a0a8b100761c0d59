"""Buchi automata, the LTL tableau translator, lasso-word semantics, and the
classical model-checking decisions built from them."""

from octal.automata.buchi import (
    Assignment,
    Buchi,
    Label,
    LassoWord,
    Transition,
    TRUE_LABEL,
    accepts,
    is_empty,
    product,
    universal_buchi,
)
from octal.automata.hoa import HoaFormatError, emit_hoa, parse_hoa
from octal.automata.semantics import eval_lasso, sample_lassos
from octal.automata.tableau import (
    TranslationBudgetError,
    equivalent,
    holds,
    lang_empty,
    translate,
)

__all__ = [
    "Assignment",
    "Buchi",
    "HoaFormatError",
    "Label",
    "LassoWord",
    "Transition",
    "TRUE_LABEL",
    "TranslationBudgetError",
    "accepts",
    "emit_hoa",
    "equivalent",
    "eval_lasso",
    "holds",
    "is_empty",
    "lang_empty",
    "parse_hoa",
    "product",
    "sample_lassos",
    "translate",
    "universal_buchi",
]

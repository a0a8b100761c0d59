import random

import pytest
from hypothesis import strategies as st

from octal.ltl import (
    BINARY_OPS,
    FALSE,
    TRUE,
    Formula,
    GenConfig,
    binary,
    not_,
    random_formula,
    to_nnf,
    unary,
    var,
)


def formulas(max_leaves: int = 6, n_vars: int = 3) -> st.SearchStrategy[Formula]:
    """Hypothesis strategy over formulas with a small variable pool."""
    names = "abcdefghijklmnopqrstuvwxyz"[:n_vars]
    leaves = st.one_of(
        st.sampled_from([var(c) for c in names]),
        st.just(TRUE),
        st.just(FALSE),
    )
    return st.recursive(
        leaves,
        lambda inner: st.one_of(
            st.builds(unary, st.sampled_from(("!", "G", "F", "X")), inner),
            st.builds(binary, st.sampled_from(BINARY_OPS), inner, inner),
        ),
        max_leaves=max_leaves,
    )


@pytest.fixture
def rng() -> random.Random:
    return random.Random(20240901)


def small_nnf_formulas(rng: random.Random, count: int, max_len: int = 8):
    """Random NNF formulas with AST size at most ``max_len``."""
    from octal.ltl import formula_length

    out = []
    while len(out) < count:
        cfg = GenConfig(size=rng.randint(1, 6), n_vars=3)
        f = to_nnf(random_formula(cfg, rng))
        if formula_length(f) <= max_len:
            out.append(f)
    return out

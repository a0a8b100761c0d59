import random
from collections import Counter

import pytest
from hypothesis import given, settings

from conftest import formulas
from octal.ltl import (
    FALSE,
    TRUE,
    Formula,
    GenConfig,
    LtlSyntaxError,
    binary,
    formula_length,
    is_nnf,
    not_,
    parse_ltl,
    print_formula,
    random_formula,
    to_nnf,
    tree_size,
    unary,
    var,
    variables,
)


class TestParse:
    def test_until_with_negated_operand(self):
        f = parse_ltl("a U !b")
        assert f == binary("U", var("a"), not_(var("b")))

    def test_constants(self):
        assert parse_ltl("1") == TRUE
        assert parse_ltl("N") == FALSE

    def test_right_associativity(self):
        # a U b U c groups as a U (b U c); checked by hand against the
        # precedence table.
        assert parse_ltl("a U b U c") == binary("U", var("a"), binary("U", var("b"), var("c")))
        assert parse_ltl("a & b | c") == binary("&", var("a"), binary("|", var("b"), var("c")))

    def test_unary_binds_tightest(self):
        assert parse_ltl("G a U b") == binary("U", unary("G", var("a")), var("b"))
        assert parse_ltl("!a & b") == binary("&", not_(var("a")), var("b"))

    def test_parentheses_override(self):
        assert parse_ltl("(a U b) U c") == binary("U", binary("U", var("a"), var("b")), var("c"))

    def test_whitespace_insignificant(self):
        assert parse_ltl("aU!b") == parse_ltl("  a U ! b ")

    @pytest.mark.parametrize("text,position", [("", 0), ("a U", 3), ("(a", 2), ("a )", 2)])
    def test_syntax_error_carries_position(self, text, position):
        with pytest.raises(LtlSyntaxError) as err:
            parse_ltl(text)
        assert err.value.position == position

    def test_rejects_bad_variable(self):
        with pytest.raises(LtlSyntaxError):
            parse_ltl("a U Q")


class TestPrint:
    def test_examples(self):
        assert print_formula(binary("U", var("a"), not_(var("b")))) == "a U !b"
        assert print_formula(FALSE) == "N"
        assert print_formula(binary("R", not_(var("a")), not_(var("b")))) == "!a R !b"

    @given(formulas())
    @settings(max_examples=300)
    def test_round_trip(self, f):
        assert parse_ltl(print_formula(f)) == f


class TestNnf:
    def test_negated_until_becomes_release(self):
        assert to_nnf(parse_ltl("!(a U b)")) == parse_ltl("!a R !b")

    def test_already_nnf_unchanged(self):
        assert to_nnf(parse_ltl("a U !b")) == parse_ltl("a U !b")

    def test_de_morgan(self):
        assert to_nnf(parse_ltl("!(a & b)")) == parse_ltl("!a | !b")

    def test_negated_finally(self):
        # Language equivalence is covered by the lasso-oracle property test.
        assert to_nnf(parse_ltl("!F a")) == parse_ltl("G !a")

    def test_weak_strong_duality(self):
        assert to_nnf(parse_ltl("!(a W b)")) == parse_ltl("!a M !b")
        assert to_nnf(parse_ltl("!(a M b)")) == parse_ltl("!a W !b")

    def test_constant_negation(self):
        assert to_nnf(not_(TRUE)) == FALSE
        assert to_nnf(not_(FALSE)) == TRUE

    @given(formulas())
    @settings(max_examples=300)
    def test_idempotent(self, f):
        once = to_nnf(f)
        assert to_nnf(once) == once

    @given(formulas())
    @settings(max_examples=300)
    def test_shape(self, f):
        assert is_nnf(to_nnf(f))


class TestLength:
    @pytest.mark.parametrize(
        "text,n",
        [("a", 1), ("a U !b", 4), ("1", 1), ("G (a & b)", 4)],
    )
    def test_counts_ast_nodes(self, text, n):
        assert formula_length(parse_ltl(text)) == n

    def test_tree_size_folds_negated_leaves(self):
        assert tree_size(parse_ltl("a U !b")) == 3
        assert formula_length(parse_ltl("a U !b")) == 4


class TestRandomFormula:
    def test_size_one_shapes(self):
        rng = random.Random(0)
        cfg = GenConfig(size=1, n_vars=1)
        seen = {print_formula(random_formula(cfg, rng)) for _ in range(200)}
        assert seen == {"a", "!a", "1", "N"}

    def test_deterministic_for_seed(self):
        cfg = GenConfig(size=15, seed=99)
        assert random_formula(cfg) == random_formula(cfg)

    def test_tree_size_within_one(self):
        rng = random.Random(5)
        for size in range(1, 21):
            cfg = GenConfig(size=size, n_vars=4)
            for _ in range(20):
                assert abs(tree_size(random_formula(cfg, rng)) - size) <= 1

    def test_respects_variable_pool(self):
        rng = random.Random(7)
        cfg = GenConfig(size=10, n_vars=2)
        for _ in range(100):
            assert variables(random_formula(cfg, rng)) <= {"a", "b"}

    def test_length_histogram_concentrated(self):
        # 10k draws at the default size: the length distribution is unimodal
        # with the bulk between 10 and 20.
        rng = random.Random(11)
        cfg = GenConfig(size=15, n_vars=4)
        lengths = Counter(formula_length(random_formula(cfg, rng)) for _ in range(10_000))
        in_band = sum(c for n, c in lengths.items() if 10 <= n <= 20)
        assert in_band / 10_000 >= 0.8
        mode = lengths.most_common(1)[0][0]
        assert 10 <= mode <= 20

    def test_weights_steer_choice(self):
        rng = random.Random(3)
        cfg = GenConfig(size=9, n_vars=2, weights={op: 0.0 for op in ("!", "G", "F", "X", "U", "R", "W", "M", "&")})
        f = random_formula(cfg, rng)
        ops = {g.kind for g in _ops(f)}
        assert ops <= {"|"}

    def test_config_validation(self):
        with pytest.raises(ValueError):
            GenConfig(size=0)
        with pytest.raises(ValueError):
            GenConfig(n_vars=27)
        with pytest.raises(ValueError):
            GenConfig(weights={"U": -1})
        with pytest.raises(ValueError):
            GenConfig(weights={"Z": 1.0})
        from octal.ltl import OPERATORS

        with pytest.raises(ValueError):
            random_formula(GenConfig(size=5, weights=dict.fromkeys(OPERATORS, 0.0)))


def _ops(f: Formula):
    from octal.ltl import iter_postfix

    return [g for g in iter_postfix(f) if g.kind not in ("var", "1", "N", "!")]


class TestFormulaType:
    def test_unary_arity_enforced(self):
        with pytest.raises(ValueError):
            Formula("G", left=var("a"), right=var("b"))
        with pytest.raises(ValueError):
            Formula("U", left=var("a"))

    def test_variable_name_restricted(self):
        with pytest.raises(ValueError):
            Formula("var", name="A")
        with pytest.raises(ValueError):
            Formula("var", name="ab")

    def test_structural_equality_and_hash(self):
        a, b = parse_ltl("G (a U b)"), parse_ltl("G(aUb)")
        assert a == b
        assert hash(a) == hash(b)
        assert len({a, b}) == 1

import pytest
from hypothesis import given, settings

from conftest import formulas, small_nnf_formulas
from octal.automata import LassoWord, eval_lasso, sample_lassos
from octal.ltl import parse_ltl, to_nnf, variables


def word(prefix, cycle):
    return LassoWord(prefix=tuple(prefix), cycle=tuple(cycle))


AB = lambda a, b: {"a": a, "b": b}


class TestEvalLasso:
    def test_true_everywhere(self):
        w = word([], [AB(False, False)])
        assert eval_lasso(parse_ltl("1"), w)
        assert not eval_lasso(parse_ltl("N"), w)

    def test_until_reaches_negated_target(self):
        # b fails at step 1 while a holds at step 0, so a U !b holds; unrolled
        # by hand from the until definition.
        w = word([AB(True, True), AB(True, False)], [AB(False, False)])
        assert eval_lasso(parse_ltl("a U !b"), w)

    def test_globally_fails_on_any_false(self):
        w = word([{"a": True}], [{"a": True}, {"a": False}])
        assert not eval_lasso(parse_ltl("G a"), w)
        assert eval_lasso(parse_ltl("G a"), word([], [{"a": True}]))

    def test_next_looks_one_step_ahead(self):
        w = word([{"a": False}], [{"a": True}])
        assert eval_lasso(parse_ltl("X a"), w)
        assert not eval_lasso(parse_ltl("a"), w)

    def test_finally_on_cycle(self):
        w = word([], [{"a": False}, {"a": True}])
        assert eval_lasso(parse_ltl("F a"), w)
        assert not eval_lasso(parse_ltl("F a"), word([{"a": True}], [{"a": False}]))

    def test_weak_until_allows_forever(self):
        w = word([], [AB(True, False)])
        assert eval_lasso(parse_ltl("a W b"), w)
        assert not eval_lasso(parse_ltl("a U b"), w)

    def test_release_dual(self):
        forever_b = word([], [AB(False, True)])
        assert eval_lasso(parse_ltl("a R b"), forever_b)
        assert not eval_lasso(parse_ltl("a M b"), forever_b)
        release_point = word([AB(False, True)], [AB(True, True)])
        assert eval_lasso(parse_ltl("a M b"), release_point)

    def test_strong_release_needs_joint_position(self):
        # b holds until a turns true, but never jointly with b.
        w = word([{"a": False, "b": True}], [{"a": True, "b": False}])
        assert not eval_lasso(parse_ltl("a M b"), w)

    def test_missing_variable_errors(self):
        with pytest.raises(ValueError):
            eval_lasso(parse_ltl("a & b"), word([], [{"a": True}]))

    def test_cycle_must_be_nonempty(self):
        with pytest.raises(ValueError):
            LassoWord(prefix=(), cycle=())


class TestNnfSoundness:
    @given(formulas(max_leaves=5))
    @settings(max_examples=150, deadline=None)
    def test_nnf_preserves_lasso_semantics(self, f):
        import random

        rng = random.Random(hash(f.key) & 0xFFFF)
        g = to_nnf(f)
        names = variables(f) | variables(g) | {"a"}
        for w in sample_lassos(frozenset(names), rng, 10):
            assert eval_lasso(f, w) == eval_lasso(g, w)


class TestSampler:
    def test_respects_bounds_and_seed(self, rng):
        words = list(sample_lassos(("a", "b"), rng, 50))
        assert len(words) == 50
        assert all(0 <= len(w.prefix) <= 3 and 1 <= len(w.cycle) <= 4 for w in words)
        import random

        again = list(sample_lassos(("a", "b"), random.Random(20240901), 50))
        assert words == again

    def test_oracle_separates_formulas(self, rng):
        # Mild distinguishing power: inequivalent small formulas disagree on
        # at least one sampled word.
        f, g = parse_ltl("F a"), parse_ltl("G a")
        assert any(
            eval_lasso(f, w) != eval_lasso(g, w) for w in sample_lassos(("a",), rng, 50)
        )

import random

import pytest

from conftest import small_nnf_formulas
from octal.automata import (
    TranslationBudgetError,
    accepts,
    equivalent,
    eval_lasso,
    holds,
    is_empty,
    lang_empty,
    sample_lassos,
    translate,
)
from octal.ltl import parse_ltl, to_nnf, variables


def nnf(text: str):
    return to_nnf(parse_ltl(text))


class TestTranslate:
    def test_false_has_empty_language(self):
        empty, witness = is_empty(translate(nnf("N")))
        assert empty and witness is None

    def test_contradiction_has_empty_language(self):
        assert lang_empty(parse_ltl("G a & F !a"))

    def test_until_accepts_immediate_fulfilment(self, rng):
        # Any word whose first letter has b false satisfies a U !b.
        b = translate(nnf("a U !b"))
        for w in sample_lassos(("a", "b"), rng, 30):
            first = dict(w.letter(0))
            first["b"] = False
            forced = type(w)(prefix=(first, *w.prefix[1:]), cycle=w.cycle)
            assert accepts(b, forced)

    def test_requires_nnf(self):
        with pytest.raises(ValueError):
            translate(parse_ltl("!(a U b)"))

    def test_node_budget(self):
        with pytest.raises(TranslationBudgetError):
            translate(nnf("(a U b) & (c U d) & (e U f)"), node_budget=2)

    def test_labels_are_literal_conjunctions(self, rng):
        for f in small_nnf_formulas(rng, 30):
            b = translate(f)
            for t in b.transitions:
                assert not (t.label.pos & t.label.neg)

    def test_differential_against_lasso_oracle(self, rng):
        # The central check: automaton acceptance must match direct semantics.
        for f in small_nnf_formulas(rng, 120):
            b = translate(f)
            names = variables(f) or frozenset("a")
            for w in sample_lassos(names, rng, 25):
                assert accepts(b, w) == eval_lasso(f, w), f.key

    def test_deterministic_construction(self):
        f = nnf("(a U b) | G !c")
        assert translate(f) == translate(f)


class TestHolds:
    def test_conjunction_implies_conjunct(self):
        assert holds(parse_ltl("a & b"), parse_ltl("a"))

    def test_reflexive(self, rng):
        for f in small_nnf_formulas(rng, 20):
            assert holds(f, f)

    def test_finally_does_not_imply_globally(self):
        assert not holds(parse_ltl("F a"), parse_ltl("G a"))

    def test_transitive_on_samples(self, rng):
        fs = small_nnf_formulas(rng, 12)
        for f1 in fs[:4]:
            for f2 in fs[4:8]:
                for f3 in fs[8:]:
                    if holds(f1, f2) and holds(f2, f3):
                        assert holds(f1, f3)


class TestEquivalent:
    def test_negated_until_release_pair(self):
        assert equivalent(parse_ltl("!(a U b)"), parse_ltl("!a R !b"))

    def test_distinct_variables_differ(self):
        assert not equivalent(parse_ltl("a"), parse_ltl("b"))

    def test_weak_until_expansion(self):
        assert equivalent(parse_ltl("a W b"), parse_ltl("(a U b) | G a"))

    def test_strong_release_expansion(self):
        assert equivalent(parse_ltl("a M b"), parse_ltl("b U (a & b)"))

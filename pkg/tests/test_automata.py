import random

import pytest

from conftest import small_nnf_formulas
from octal.automata import (
    Buchi,
    Label,
    LassoWord,
    Transition,
    accepts,
    is_empty,
    product,
    sample_lassos,
    translate,
    universal_buchi,
)
from octal.automata.buchi import _cyclic_components, _reachable_from, _scc_components
from octal.ltl import not_, parse_ltl, to_nnf, variables


def nnf(text):
    return to_nnf(parse_ltl(text))


def scc_empty(b: Buchi) -> bool:
    """Independent emptiness oracle: reachable cyclic SCC with an accepting state."""
    succ = [[] for _ in range(b.n_states)]
    for t in b.transitions:
        succ[t.src].append(t.dst)
    reach = _reachable_from(b.init, succ)
    comp = _scc_components(b.n_states, succ)
    cyclic = _cyclic_components(comp, succ)
    return not any(q in reach and comp[q] in cyclic for q in b.accepting)


class TestBuchiType:
    def test_validation(self):
        with pytest.raises(ValueError):
            Buchi(n_states=1, init=2, accepting=frozenset(), ap=(), transitions=())
        with pytest.raises(ValueError):
            Buchi(n_states=1, init=0, accepting=frozenset({3}), ap=(), transitions=())
        with pytest.raises(ValueError):
            Buchi(
                n_states=1,
                init=0,
                accepting=frozenset(),
                ap=("b", "a"),
                transitions=(),
            )
        with pytest.raises(ValueError):
            Buchi(
                n_states=1,
                init=0,
                accepting=frozenset(),
                ap=("a",),
                transitions=(Transition(0, 5, Label()),),
            )

    def test_label_rejects_contradiction(self):
        with pytest.raises(ValueError):
            Label(frozenset("a"), frozenset("a"))

    def test_label_conjoin(self):
        joint = Label(frozenset("a")).conjoin(Label(frozenset(), frozenset("b")))
        assert joint == Label(frozenset("a"), frozenset("b"))
        assert Label(frozenset("a")).conjoin(Label(frozenset(), frozenset("a"))) is None


class TestAccepts:
    def test_universal_accepts_everything(self, rng):
        b = universal_buchi(("a",))
        for w in sample_lassos(("a",), rng, 20):
            assert accepts(b, w)

    def test_no_accepting_states_rejects_everything(self, rng):
        b = Buchi(
            n_states=1,
            init=0,
            accepting=frozenset(),
            ap=("a",),
            transitions=(Transition(0, 0, Label()),),
        )
        for w in sample_lassos(("a",), rng, 20):
            assert not accepts(b, w)

    def test_requires_ap_coverage(self):
        b = universal_buchi(("a", "b"))
        with pytest.raises(ValueError):
            accepts(b, LassoWord(prefix=(), cycle=({"a": True},)))


class TestProduct:
    def test_formula_and_negation_is_empty(self):
        # The worked example: the product for a U !b with its negation accepts
        # nothing.
        f = parse_ltl("a U !b")
        b = translate(nnf("a U !b"))
        b_neg = translate(to_nnf(not_(f)))
        empty, _ = is_empty(product(b, b_neg))
        assert empty

    def test_identity_with_universal(self, rng):
        for f in small_nnf_formulas(rng, 15):
            b = translate(f)
            names = variables(f) or frozenset("a")
            p = product(b, universal_buchi(sorted(names)))
            for w in sample_lassos(names, rng, 15):
                assert accepts(p, w) == accepts(b, w)

    def test_state_bound(self, rng):
        for f in small_nnf_formulas(rng, 10):
            g = small_nnf_formulas(rng, 1)[0]
            b1, b2 = translate(f), translate(g)
            assert product(b1, b2).n_states <= 3 * b1.n_states * b2.n_states

    def test_language_is_intersection(self, rng):
        for _ in range(15):
            f, g = small_nnf_formulas(rng, 2)
            b1, b2 = translate(f), translate(g)
            p = product(b1, b2)
            names = variables(f) | variables(g) | {"a"}
            for w in sample_lassos(frozenset(names), rng, 15):
                assert accepts(p, w) == (accepts(b1, w) and accepts(b2, w))

    def test_emptiness_symmetric(self, rng):
        for _ in range(10):
            f, g = small_nnf_formulas(rng, 2)
            b1, b2 = translate(f), translate(g)
            assert is_empty(product(b1, b2))[0] == is_empty(product(b2, b1))[0]

    def test_merges_ap_lists(self):
        p = product(translate(nnf("a")), translate(nnf("c")))
        assert p.ap == ("a", "c")


class TestIsEmpty:
    def test_unreachable_accepting_state(self):
        b = Buchi(
            n_states=2,
            init=0,
            accepting=frozenset({1}),
            ap=(),
            transitions=(Transition(0, 0, Label()), Transition(1, 1, Label())),
        )
        empty, witness = is_empty(b)
        assert empty and witness is None

    def test_witness_is_accepted(self, rng):
        for f in small_nnf_formulas(rng, 40):
            b = translate(f)
            empty, witness = is_empty(b)
            if not empty:
                assert accepts(b, witness)
            assert empty == scc_empty(b)

    def test_witness_cycle_nonempty(self, rng):
        for f in small_nnf_formulas(rng, 20):
            empty, witness = is_empty(translate(f))
            if witness is not None:
                assert len(witness.cycle) >= 1

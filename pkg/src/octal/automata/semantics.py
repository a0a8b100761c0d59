"""Direct LTL semantics on ultimately periodic words.

This is the independent oracle the translator is tested against: it never looks
at automata, only at the formula and the word.  Temporal operators are solved as
fixpoints over the finitely many distinct positions of a lasso word.
"""

from __future__ import annotations

import random
from typing import Iterator

from octal.automata.buchi import LassoWord
from octal.ltl import Formula, variables


def eval_lasso(f: Formula, w: LassoWord) -> bool:
    """Whether ``w`` satisfies ``f`` under standard LTL semantics.

    Raises ValueError when some variable of ``f`` is missing from the word's
    assignments.
    """
    if not w.covers(variables(f)):
        raise ValueError("word assignments do not cover the formula's variables")
    return _values(f, w, {})[0]


# Least fixpoints start from all-false, greatest fixpoints from all-true.
_LEAST = {"U", "M", "F"}
_GREATEST = {"R", "W", "G"}


def _values(f: Formula, w: LassoWord, memo: dict[Formula, list[bool]]) -> list[bool]:
    cached = memo.get(f)
    if cached is not None:
        return cached
    n = w.n_positions
    kind = f.kind
    if kind == "var":
        out = [bool(w.letter(p)[f.name]) for p in range(n)]
    elif kind == "1":
        out = [True] * n
    elif kind == "N":
        out = [False] * n
    elif kind == "!":
        out = [not v for v in _values(f.left, w, memo)]
    elif kind == "&":
        lv = _values(f.left, w, memo)
        rv = _values(f.right, w, memo)
        out = [a and b for a, b in zip(lv, rv)]
    elif kind == "|":
        lv = _values(f.left, w, memo)
        rv = _values(f.right, w, memo)
        out = [a or b for a, b in zip(lv, rv)]
    elif kind == "X":
        cv = _values(f.left, w, memo)
        out = [cv[w.succ(p)] for p in range(n)]
    else:
        out = _fixpoint(f, w, memo)
    memo[f] = out
    return out


def _fixpoint(f: Formula, w: LassoWord, memo: dict[Formula, list[bool]]) -> list[bool]:
    n = w.n_positions
    kind = f.kind
    if kind in ("G", "F"):
        first = _values(f.left, w, memo)
        second = None
    else:
        first = _values(f.left, w, memo)
        second = _values(f.right, w, memo)
    vals = [kind in _GREATEST] * n

    def step(p: int, nxt: bool) -> bool:
        # Expansion laws:
        #   F g     = g | X F g            G g     = g & X G g
        #   a U b   = b | (a & X(a U b))   a R b   = b & (a | X(a R b))
        #   a W b   = b | (a & X(a W b))   a M b   = b & (a | X(a M b))
        if kind == "F":
            return first[p] or nxt
        if kind == "G":
            return first[p] and nxt
        if kind in ("U", "W"):
            return second[p] or (first[p] and nxt)
        return second[p] and (first[p] or nxt)

    for _ in range(n + 1):
        new = [step(p, vals[w.succ(p)]) for p in range(n)]
        if new == vals:
            break
        vals = new
    return vals


def sample_lassos(
    ap: tuple[str, ...] | frozenset[str],
    rng: random.Random,
    count: int,
    max_prefix: int = 3,
    max_cycle: int = 4,
) -> Iterator[LassoWord]:
    """Random lasso words over ``ap``: prefix length 0..max_prefix, cycle length
    1..max_cycle, each variable assignment uniform.  Small bounds are enough to
    separate small formulas with high probability while keeping failures easy to
    reproduce from the seed.
    """
    names = sorted(ap)

    def assignment() -> dict[str, bool]:
        return {v: rng.random() < 0.5 for v in names}

    for _ in range(count):
        prefix = tuple(assignment() for _ in range(rng.randint(0, max_prefix)))
        cycle = tuple(assignment() for _ in range(rng.randint(1, max_cycle)))
        yield LassoWord(prefix=prefix, cycle=cycle)

"""Linear temporal logic formulas: parsing, printing, NNF, metrics, random generation.

Concrete syntax (whitespace insignificant)::

    expr     := temporal (("&" | "|") expr)?
    temporal := unary (("U" | "R" | "W" | "M") temporal)?
    unary    := ("!" | "G" | "F" | "X") unary | atom
    atom     := "a".."z" | "1" | "N" | "(" expr ")"

Variables are the 26 lowercase letters, ``1`` is the constant true and ``N`` the
constant false.  Every binary operator is right associative; unary operators bind
tightest, the temporal binaries next, and the boolean connectives ``&``/``|`` share
the loosest level.  Implication and equivalence are not part of the syntax; write
``!a | b`` instead of ``a -> b``.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from typing import Iterator, Mapping

VARIABLES = "abcdefghijklmnopqrstuvwxyz"

UNARY_OPS = ("!", "G", "F", "X")
TEMPORAL_BINARY_OPS = ("U", "R", "W", "M")
BOOLEAN_OPS = ("&", "|")
BINARY_OPS = TEMPORAL_BINARY_OPS + BOOLEAN_OPS
OPERATORS = UNARY_OPS + BINARY_OPS


@dataclass(frozen=True, eq=False)
class Formula:
    """Immutable LTL syntax tree node.

    ``kind`` is ``"var"``, ``"1"``, ``"N"``, or one of the operator symbols.
    ``key`` is a canonical s-expression string; it doubles as a process-independent
    sort key so that orderings derived from formulas are reproducible.
    """

    kind: str
    name: str = ""
    left: "Formula | None" = None
    right: "Formula | None" = None
    key: str = field(init=False, repr=False)

    def __post_init__(self) -> None:
        if self.kind == "var":
            if len(self.name) != 1 or self.name not in VARIABLES:
                raise ValueError(f"variable must be a single letter a-z, got {self.name!r}")
            if self.left is not None or self.right is not None:
                raise ValueError("variable nodes take no children")
            key = self.name
        elif self.kind in ("1", "N"):
            if self.name or self.left is not None or self.right is not None:
                raise ValueError("constant nodes take no children")
            key = self.kind
        elif self.kind in UNARY_OPS:
            if self.left is None or self.right is not None:
                raise ValueError(f"unary operator {self.kind!r} takes exactly one child")
            key = f"({self.kind} {self.left.key})"
        elif self.kind in BINARY_OPS:
            if self.left is None or self.right is None:
                raise ValueError(f"binary operator {self.kind!r} takes exactly two children")
            key = f"({self.kind} {self.left.key} {self.right.key})"
        else:
            raise ValueError(f"unknown formula kind {self.kind!r}")
        object.__setattr__(self, "key", key)

    def __eq__(self, other: object) -> bool:
        return isinstance(other, Formula) and self.key == other.key

    def __hash__(self) -> int:
        return hash(self.key)

    def __str__(self) -> str:
        return print_formula(self)

    @property
    def is_literal(self) -> bool:
        """True for a variable or a negated variable."""
        if self.kind == "var":
            return True
        return self.kind == "!" and self.left is not None and self.left.kind == "var"

    @property
    def is_const(self) -> bool:
        return self.kind in ("1", "N")

    def children(self) -> tuple["Formula", ...]:
        if self.left is None:
            return ()
        if self.right is None:
            return (self.left,)
        return (self.left, self.right)


TRUE = Formula("1")
FALSE = Formula("N")


def var(name: str) -> Formula:
    return Formula("var", name=name)


def unary(op: str, child: Formula) -> Formula:
    return Formula(op, left=child)


def binary(op: str, left: Formula, right: Formula) -> Formula:
    return Formula(op, left=left, right=right)


def not_(f: Formula) -> Formula:
    return Formula("!", left=f)


def and_(left: Formula, right: Formula) -> Formula:
    return Formula("&", left=left, right=right)


def or_(left: Formula, right: Formula) -> Formula:
    return Formula("|", left=left, right=right)


def iter_postfix(f: Formula) -> Iterator[Formula]:
    """Yield subformulas children-first, left before right."""
    for child in f.children():
        yield from iter_postfix(child)
    yield f


def variables(f: Formula) -> frozenset[str]:
    return frozenset(g.name for g in iter_postfix(f) if g.kind == "var")


def formula_length(f: Formula) -> int:
    """Number of syntax-tree nodes; ``!`` and constants count like any other node."""
    return sum(1 for _ in iter_postfix(f))


def tree_size(f: Formula) -> int:
    """Expression-tree size where a negated variable counts as a single leaf.

    This matches the node count of the specification tree built for NNF formulas,
    and is the size notion targeted by :func:`random_formula`.
    """
    if f.is_literal or f.is_const:
        return 1
    return 1 + sum(tree_size(c) for c in f.children())


def is_nnf(f: Formula) -> bool:
    """True when every ``!`` is the direct parent of a variable."""
    return all(g.kind != "!" or g.is_literal for g in iter_postfix(f))


class LtlSyntaxError(ValueError):
    def __init__(self, message: str, position: int):
        super().__init__(f"{message} (at position {position})")
        self.position = position


def parse_ltl(text: str) -> Formula:
    """Parse the textual syntax described in the module docstring.

    Raises :class:`LtlSyntaxError` with the offending character position on
    malformed input.
    """
    tokens = [(ch, i) for i, ch in enumerate(text) if not ch.isspace()]
    if not tokens:
        raise LtlSyntaxError("empty formula", 0)
    end = len(text)
    cursor = 0

    def peek() -> str | None:
        return tokens[cursor][0] if cursor < len(tokens) else None

    def take() -> str:
        nonlocal cursor
        ch = tokens[cursor][0]
        cursor += 1
        return ch

    def here() -> int:
        return tokens[cursor][1] if cursor < len(tokens) else end

    def expr() -> Formula:
        lhs = temporal()
        if peek() in BOOLEAN_OPS:
            return binary(take(), lhs, expr())
        return lhs

    def temporal() -> Formula:
        lhs = prefix()
        if peek() in TEMPORAL_BINARY_OPS:
            return binary(take(), lhs, temporal())
        return lhs

    def prefix() -> Formula:
        if peek() in UNARY_OPS:
            return unary(take(), prefix())
        return atom()

    def atom() -> Formula:
        ch = peek()
        pos = here()
        if ch is None:
            raise LtlSyntaxError("unexpected end of formula", pos)
        if ch == "(":
            take()
            inner = expr()
            if peek() != ")":
                raise LtlSyntaxError("expected ')'", here())
            take()
            return inner
        if ch == "1":
            take()
            return TRUE
        if ch == "N":
            take()
            return FALSE
        if ch in VARIABLES:
            take()
            return var(ch)
        raise LtlSyntaxError(f"unexpected character {ch!r}", pos)

    result = expr()
    if cursor != len(tokens):
        raise LtlSyntaxError(f"unexpected trailing input {tokens[cursor][0]!r}", here())
    return result


def print_formula(f: Formula) -> str:
    """Render with the fewest parentheses that still round-trip through parse_ltl."""
    text, _ = _render(f)
    return text


def _render(f: Formula) -> tuple[str, int]:
    # Levels: 3 atoms, 2 unary, 1 temporal binary, 0 boolean binary.
    if f.kind == "var":
        return f.name, 3
    if f.kind in ("1", "N"):
        return f.kind, 3
    if f.kind == "!":
        text, level = _render(f.left)
        return ("!" + text) if level >= 2 else ("!(" + text + ")"), 2
    if f.kind in ("G", "F", "X"):
        text, level = _render(f.left)
        return (f"{f.kind} {text}") if level >= 2 else (f"{f.kind} ({text})"), 2
    level = 1 if f.kind in TEMPORAL_BINARY_OPS else 0
    left_text, left_level = _render(f.left)
    right_text, right_level = _render(f.right)
    if left_level <= level:
        left_text = f"({left_text})"
    if right_level < level:
        right_text = f"({right_text})"
    return f"{left_text} {f.kind} {right_text}", level


_DUALS = {"U": "R", "R": "U", "W": "M", "M": "W", "&": "|", "|": "&"}


def to_nnf(f: Formula) -> Formula:
    """Negation normal form: ``!`` pushed onto variables, constants folded away.

    Dual pairs: De Morgan over ``&``/``|``, ``!G <-> F!``, ``!F <-> G!``,
    ``!X <-> X!``, ``!(a U b) <-> !a R !b``, ``!(a W b) <-> !a M !b``, and the
    reverses.  The result is language-equivalent to the input.
    """
    return _nnf(f, False)


def _nnf(f: Formula, negated: bool) -> Formula:
    kind = f.kind
    if kind == "var":
        return not_(f) if negated else f
    if kind == "1":
        return FALSE if negated else TRUE
    if kind == "N":
        return TRUE if negated else FALSE
    if kind == "!":
        return _nnf(f.left, not negated)
    if kind in ("G", "F"):
        op = ("F" if kind == "G" else "G") if negated else kind
        return _fold_unary(op, _nnf(f.left, negated))
    if kind == "X":
        return _fold_unary("X", _nnf(f.left, negated))
    op = _DUALS[kind] if negated else kind
    return _fold_binary(op, _nnf(f.left, negated), _nnf(f.right, negated))


def _fold_unary(op: str, child: Formula) -> Formula:
    # G/F/X applied to a constant is that constant.
    if child.is_const:
        return child
    return unary(op, child)


def _fold_binary(op: str, left: Formula, right: Formula) -> Formula:
    # Constant folding only; anything beyond that is simplification we do not do.
    if op == "&":
        if left.kind == "1":
            return right
        if right.kind == "1":
            return left
        if left.kind == "N" or right.kind == "N":
            return FALSE
    elif op == "|":
        if left.kind == "N":
            return right
        if right.kind == "N":
            return left
        if left.kind == "1" or right.kind == "1":
            return TRUE
    elif op == "U":
        if right.is_const:
            return right
        if left.kind == "N":
            return right
        if left.kind == "1":
            return _fold_unary("F", right)
    elif op == "R":
        if right.is_const:
            return right
        if left.kind == "1":
            return right
        if left.kind == "N":
            return _fold_unary("G", right)
    elif op == "W":
        if left.kind == "1" or right.kind == "1":
            return TRUE
        if right.kind == "N":
            return _fold_unary("G", left)
        if left.kind == "N":
            return right
    elif op == "M":
        if left.kind == "N" or right.kind == "N":
            return FALSE
        if right.kind == "1":
            return _fold_unary("F", left)
        if left.kind == "1":
            return right
    return binary(op, left, right)


@dataclass(frozen=True)
class GenConfig:
    """Knobs for :func:`random_formula`.

    ``size`` is the target expression-tree size (negated variables count as one
    leaf), ``n_vars`` the number of letters drawn from the start of the alphabet,
    and ``weights`` optional per-operator selection weights.
    """

    size: int = 15
    n_vars: int = 26
    weights: Mapping[str, float] | None = None
    seed: int | None = None

    def __post_init__(self) -> None:
        if self.size < 1:
            raise ValueError("size must be at least 1")
        if not 1 <= self.n_vars <= 26:
            raise ValueError("n_vars must be between 1 and 26")
        if self.weights is not None:
            unknown = set(self.weights) - set(OPERATORS)
            if unknown:
                raise ValueError(f"unknown operators in weights: {sorted(unknown)}")
            if any(w < 0 for w in self.weights.values()):
                raise ValueError("weights must be nonnegative")

    def resolved_weights(self) -> dict[str, float]:
        full = dict.fromkeys(OPERATORS, 1.0)
        if self.weights is not None:
            full.update(self.weights)
        if sum(full.values()) <= 0:
            raise ValueError("operator weights must not all be zero")
        return full


def random_formula(cfg: GenConfig, rng: random.Random | None = None) -> Formula:
    """Draw a random formula with tree size within one of ``cfg.size``.

    Operators are chosen by weight and the remaining size budget is split
    uniformly between binary children.  Deterministic for a fixed seed; callers
    that parallelize should hand each task its own ``rng``.
    """
    if rng is None:
        rng = random.Random(cfg.seed)
    weights = cfg.resolved_weights()
    pool = VARIABLES[: cfg.n_vars]
    unary_weights = [weights[op] for op in UNARY_OPS]
    all_weights = [weights[op] for op in OPERATORS]

    def leaf() -> Formula:
        r = rng.random()
        if r < 0.4:
            return var(pool[rng.randrange(len(pool))])
        if r < 0.8:
            return not_(var(pool[rng.randrange(len(pool))]))
        if r < 0.9:
            return TRUE
        return FALSE

    def build(budget: int) -> Formula:
        if budget <= 1:
            return leaf()
        if budget == 2:
            if sum(unary_weights) <= 0:
                return leaf()
            op = rng.choices(UNARY_OPS, weights=unary_weights)[0]
            return unary(op, build(1))
        op = rng.choices(OPERATORS, weights=all_weights)[0]
        if op in UNARY_OPS:
            return unary(op, build(budget - 1))
        split = rng.randint(1, budget - 2)
        return binary(op, build(split), build(budget - 1 - split))

    return build(cfg.size)

"""Reader and writer for a Buchi-only subset of the HOA interchange format.

Supported shape::

    HOA: v1
    States: <n>
    Start: <i>
    AP: <k> "a" "b" ...
    acc-name: Buchi
    Acceptance: 1 Inf(0)
    --BODY--
    State: <i> {0}
    [<boolean expression over AP indices, t for true>] <dest>
    ...
    --END--

Any acceptance condition other than a single Inf set is rejected, as are more
than 26 APs or AP names outside single letters a-z.  Disjunctive edge guards
are split into parallel literal-conjunction transitions on ingestion;
unsatisfiable disjuncts are dropped.
"""

from __future__ import annotations

import re

from octal.automata.buchi import Buchi, Label, Transition
from octal.ltl import VARIABLES


class HoaFormatError(ValueError):
    pass


def emit_hoa(b: Buchi) -> str:
    lines = [
        "HOA: v1",
        f"States: {b.n_states}",
        f"Start: {b.init}",
        "AP: " + " ".join([str(len(b.ap)), *[f'"{name}"' for name in b.ap]]),
        "acc-name: Buchi",
        "Acceptance: 1 Inf(0)",
        "--BODY--",
    ]
    ap_index = {name: i for i, name in enumerate(b.ap)}
    adj = b.out_edges()
    for q in range(b.n_states):
        mark = " {0}" if q in b.accepting else ""
        lines.append(f"State: {q}{mark}")
        for dst, label in adj[q]:
            lines.append(f"[{_guard_text(label, ap_index)}] {dst}")
    lines.append("--END--")
    return "\n".join(lines) + "\n"


def _guard_text(label: Label, ap_index: dict[str, int]) -> str:
    if label.is_true:
        return "t"
    parts = [str(ap_index[v]) for v in sorted(label.pos)]
    parts += [f"!{ap_index[v]}" for v in sorted(label.neg)]
    return " & ".join(parts)


_STATE_RE = re.compile(r"^State:\s*(\d+)\s*(\{[^}]*\})?\s*$")
_EDGE_RE = re.compile(r"^\[(.*)\]\s*(\d+)\s*(\{[^}]*\})?\s*$")


def parse_hoa(text: str) -> Buchi:
    lines = [ln.strip() for ln in text.splitlines()]
    lines = [ln for ln in lines if ln]
    if not lines:
        raise HoaFormatError("empty input")

    header: dict[str, str] = {}
    body_at = None
    if lines[0] != "HOA: v1":
        raise HoaFormatError("expected 'HOA: v1' on the first line")
    for i, line in enumerate(lines[1:], start=1):
        if line == "--BODY--":
            body_at = i
            break
        key, sep, value = line.partition(":")
        if not sep:
            raise HoaFormatError(f"malformed header line: {line!r}")
        key = key.strip()
        if key in header and key in ("States", "Start", "AP", "Acceptance"):
            raise HoaFormatError(f"duplicate header {key!r}")
        header[key] = value.strip()
    if body_at is None:
        raise HoaFormatError("missing --BODY--")

    for required in ("States", "Start", "AP", "Acceptance"):
        if required not in header:
            raise HoaFormatError(f"missing header {required!r}")
    if not re.fullmatch(r"1\s+Inf\(\s*0\s*\)", header["Acceptance"]):
        raise HoaFormatError(
            f"unsupported acceptance condition {header['Acceptance']!r}; only '1 Inf(0)'"
        )
    if "acc-name" in header and header["acc-name"] != "Buchi":
        raise HoaFormatError(f"unsupported acc-name {header['acc-name']!r}")

    n_states = _parse_int(header["States"], "States")
    if not re.fullmatch(r"\d+", header["Start"]):
        raise HoaFormatError("exactly one initial state is supported")
    init = int(header["Start"])

    ap_parts = header["AP"].split(None, 1)
    n_ap = _parse_int(ap_parts[0], "AP count")
    names = re.findall(r'"([^"]*)"', ap_parts[1] if len(ap_parts) > 1 else "")
    if len(names) != n_ap:
        raise HoaFormatError(f"AP header declares {n_ap} names but lists {len(names)}")
    if n_ap > 26:
        raise HoaFormatError("more than 26 APs")
    for name in names:
        if len(name) != 1 or name not in VARIABLES:
            raise HoaFormatError(f"AP name must be a single letter a-z, got {name!r}")
    if len(set(names)) != len(names):
        raise HoaFormatError("duplicate AP names")

    transitions: list[Transition] = []
    accepting: set[int] = set()
    seen_states: set[int] = set()
    current: int | None = None
    ended = False
    for line in lines[body_at + 1 :]:
        if ended:
            raise HoaFormatError(f"content after --END--: {line!r}")
        if line == "--END--":
            ended = True
            continue
        m = _STATE_RE.match(line)
        if m:
            current = int(m.group(1))
            if current >= n_states:
                raise HoaFormatError(f"state {current} out of range")
            if current in seen_states:
                raise HoaFormatError(f"duplicate state block {current}")
            seen_states.add(current)
            sig = m.group(2)
            if sig is not None:
                if sig.replace(" ", "") != "{0}":
                    raise HoaFormatError(f"unsupported acceptance signature {sig!r}")
                accepting.add(current)
            continue
        m = _EDGE_RE.match(line)
        if m:
            if current is None:
                raise HoaFormatError("edge before any State: block")
            if m.group(3) is not None:
                raise HoaFormatError("transition-based acceptance is not supported")
            dst = int(m.group(2))
            if dst >= n_states:
                raise HoaFormatError(f"edge destination {dst} out of range")
            for pos, neg in _guard_disjuncts(m.group(1), n_ap):
                label = Label(
                    frozenset(names[i] for i in pos),
                    frozenset(names[i] for i in neg),
                )
                transitions.append(Transition(current, dst, label))
            continue
        raise HoaFormatError(f"malformed body line: {line!r}")
    if not ended:
        raise HoaFormatError("missing --END--")
    if init >= n_states:
        raise HoaFormatError(f"initial state {init} out of range")

    return Buchi(
        n_states=n_states,
        init=init,
        accepting=frozenset(accepting),
        ap=tuple(sorted(names)),
        transitions=tuple(transitions),
    )


def _parse_int(text: str, what: str) -> int:
    if not re.fullmatch(r"\d+", text.strip()):
        raise HoaFormatError(f"malformed {what}: {text!r}")
    return int(text)


# --- guard expressions -----------------------------------------------------
#
# guard := disj ; disj := conj ("|" conj)* ; conj := lit ("&" lit)*
# lit   := "!" lit | "t" | "f" | <int> | "(" disj ")"

_GUARD_TOKEN = re.compile(r"\s*(\d+|[tf!&|()])")


def _guard_disjuncts(text: str, n_ap: int) -> list[tuple[frozenset[int], frozenset[int]]]:
    """Parse a guard into satisfiable (positive, negated) AP-index disjuncts."""
    tokens: list[str] = []
    pos = 0
    while pos < len(text):
        m = _GUARD_TOKEN.match(text, pos)
        if m is None:
            if text[pos:].strip():
                raise HoaFormatError(f"malformed guard {text!r}")
            break
        tokens.append(m.group(1))
        pos = m.end()
    if not tokens:
        raise HoaFormatError("empty guard")
    cursor = 0

    def peek() -> str | None:
        return tokens[cursor] if cursor < len(tokens) else None

    def take() -> str:
        nonlocal cursor
        tok = tokens[cursor]
        cursor += 1
        return tok

    def disj(negated: bool):
        terms = [conj(negated)]
        while peek() == "|":
            take()
            terms.append(conj(negated))
        return _merge_all(terms) if negated else [d for t in terms for d in t]

    def conj(negated: bool):
        terms = [lit(negated)]
        while peek() == "&":
            take()
            terms.append(lit(negated))
        return [d for t in terms for d in t] if negated else _merge_all(terms)

    def lit(negated: bool):
        tok = peek()
        if tok is None:
            raise HoaFormatError(f"truncated guard {text!r}")
        if tok == "!":
            take()
            return lit(not negated)
        if tok == "(":
            take()
            inner = disj(negated)
            if peek() != ")":
                raise HoaFormatError(f"unbalanced parentheses in guard {text!r}")
            take()
            return inner
        if tok == "t":
            take()
            return [] if negated else [(frozenset(), frozenset())]
        if tok == "f":
            take()
            return [(frozenset(), frozenset())] if negated else []
        take()
        i = int(tok)
        if i >= n_ap:
            raise HoaFormatError(f"AP index {i} out of range in guard {text!r}")
        if negated:
            return [(frozenset(), frozenset({i}))]
        return [(frozenset({i}), frozenset())]

    result = disj(False)
    if cursor != len(tokens):
        raise HoaFormatError(f"unexpected token {tokens[cursor]!r} in guard {text!r}")
    # Deduplicate while preserving first occurrence.
    seen = set()
    unique = []
    for d in result:
        if d not in seen:
            seen.add(d)
            unique.append(d)
    return unique


def _merge_all(term_lists):
    """Cross product of disjunct lists, dropping contradictory combinations."""
    acc = [(frozenset(), frozenset())]
    for terms in term_lists:
        nxt = []
        for p1, n1 in acc:
            for p2, n2 in terms:
                p = p1 | p2
                n = n1 | n2
                if p & n:
                    continue
                nxt.append((p, n))
        acc = nxt
    return acc

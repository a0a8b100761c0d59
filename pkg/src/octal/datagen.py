"""Labeled dataset synthesis for the two model-checking scenarios.

Every datapoint pairs a specification formula with a system automaton obtained
by translating a provenance formula, so the classical checker can label it and
later re-verify it.  The general scenario asks whether the system's language is
contained in the specification's; the special scenario asks for language
equality.

Per specification ``phi`` the general scenario emits four systems:

* equivalent           (label 1)
* strict implication   (label 1): translate(phi & psi), strictly stronger
* overlap              (label 0): shares words with phi and with !phi
* disjoint             (label 0): translate(!phi)

The special scenario emits the equivalent system (label 1) plus one zero case,
rotating through strict implication on every other spec and the three
non-implication makers in between, so the zero cases are half implication and
half non-implication.
"""

from __future__ import annotations

import json
import logging
import math
import random
from dataclasses import dataclass, field

from octal.automata import (
    Buchi,
    TranslationBudgetError,
    emit_hoa,
    equivalent,
    holds,
    is_empty,
    parse_hoa,
    translate,
)
from octal.ltl import (
    Formula,
    GenConfig,
    and_,
    formula_length,
    not_,
    or_,
    parse_ltl,
    print_formula,
    random_formula,
    to_nnf,
)

log = logging.getLogger(__name__)

SCENARIOS = ("general", "special")
TAGS = ("equivalent", "strict-implication", "overlap", "disjoint", "reverse-implication")

# Zero cases for the special scenario: every other one is a strict implication,
# the rest rotate through the non-implication makers.
_SPECIAL_ZERO_ROTATION = (
    "strict-implication",
    "overlap",
    "strict-implication",
    "disjoint",
    "strict-implication",
    "reverse-implication",
)

_NODE_BUDGET = 20000


class DatasetError(ValueError):
    pass


@dataclass(frozen=True)
class Sample:
    """One datapoint: specification, system, provenance formula, oracle label."""

    phi: Formula
    phi_src: Formula
    system: Buchi
    label: int
    scenario_tag: str
    split: str

    def to_json(self) -> str:
        record = {
            "phi": print_formula(self.phi),
            "phi_src": print_formula(self.phi_src),
            "hoa": emit_hoa(self.system),
            "label": self.label,
            "scenario": self.scenario_tag,
            "split": self.split,
        }
        return json.dumps(record, sort_keys=True)

    @staticmethod
    def from_json(line: str) -> "Sample":
        record = json.loads(line)
        if record["scenario"] not in TAGS:
            raise DatasetError(f"unknown scenario tag {record['scenario']!r}")
        if record["label"] not in (0, 1):
            raise DatasetError(f"label must be 0 or 1, got {record['label']!r}")
        return Sample(
            phi=parse_ltl(record["phi"]),
            phi_src=parse_ltl(record["phi_src"]),
            system=parse_hoa(record["hoa"]),
            label=int(record["label"]),
            scenario_tag=record["scenario"],
            split=record["split"],
        )


@dataclass(frozen=True)
class DatasetConfig:
    scenario: str = "special"
    n_specs: int = 100
    gen: GenConfig = field(default_factory=GenConfig)
    retry_cap: int = 50
    seed: int = 0
    max_len: int = 80
    max_states: int = 95
    test_fraction: float = 0.1

    def __post_init__(self) -> None:
        if self.scenario not in SCENARIOS:
            raise ValueError(f"scenario must be one of {SCENARIOS}")
        if self.n_specs < 1:
            raise ValueError("n_specs must be positive")
        if not 0.0 <= self.test_fraction < 1.0:
            raise ValueError("test_fraction must be in [0, 1)")


@dataclass
class DatasetStats:
    n_samples: int = 0
    skipped_specs: int = 0
    len_range: tuple[int, int] | None = None
    state_range: tuple[int, int] | None = None
    transition_range: tuple[int, int] | None = None

    def absorb(self, sample: Sample) -> None:
        self.n_samples += 1
        self.len_range = _widen(self.len_range, formula_length(sample.phi))
        self.state_range = _widen(self.state_range, sample.system.n_states)
        self.transition_range = _widen(self.transition_range, len(sample.system.transitions))


def _widen(span: tuple[int, int] | None, value: int) -> tuple[int, int]:
    if span is None:
        return (value, value)
    return (min(span[0], value), max(span[1], value))


class _MakerFailed(Exception):
    """A system maker ran out of retries for this spec."""


def _translate_capped(f: Formula, max_states: int) -> Buchi:
    b = translate(to_nnf(f), node_budget=_NODE_BUDGET)
    if b.n_states > max_states:
        raise _MakerFailed(f"automaton too large ({b.n_states} states)")
    return b


def _lang_empty(f: Formula) -> bool:
    empty, _ = is_empty(translate(to_nnf(f), node_budget=_NODE_BUDGET))
    return empty


def make_equivalent(phi: Formula, max_states: int = 95) -> tuple[Formula, Buchi]:
    """System with exactly phi's language; the variant used is phi itself."""
    return phi, _translate_capped(phi, max_states)


def make_strict_implicant(
    phi: Formula, rng: random.Random, cfg: DatasetConfig
) -> tuple[Formula, Buchi]:
    """phi & psi for random psi, retried until satisfiable and strictly stronger."""
    psi_cfg = _psi_config(cfg)
    for _ in range(cfg.retry_cap):
        psi = random_formula(psi_cfg, rng)
        candidate = and_(phi, psi)
        try:
            if _lang_empty(candidate):
                continue
            if holds(phi, candidate, node_budget=_NODE_BUDGET):
                continue  # not strictly stronger
            return candidate, _translate_capped(candidate, cfg.max_states)
        except (_MakerFailed, TranslationBudgetError):
            continue
    raise _MakerFailed("strict implicant retries exhausted")


def make_overlap(phi: Formula, rng: random.Random, cfg: DatasetConfig) -> tuple[Formula, Buchi]:
    """Random formula overlapping phi without implying it."""
    for _ in range(cfg.retry_cap):
        candidate = random_formula(cfg.gen, rng)
        try:
            if _lang_empty(and_(candidate, phi)):
                continue
            if _lang_empty(and_(candidate, not_(phi))):
                continue
            return candidate, _translate_capped(candidate, cfg.max_states)
        except (_MakerFailed, TranslationBudgetError):
            continue
    raise _MakerFailed("overlap retries exhausted")


def make_disjoint(phi: Formula, max_states: int = 95) -> tuple[Formula, Buchi]:
    """The complement formula; shares no word with phi by construction."""
    candidate = to_nnf(not_(phi))
    return candidate, _translate_capped(candidate, max_states)


def make_reverse_implicant(
    phi: Formula, rng: random.Random, cfg: DatasetConfig
) -> tuple[Formula, Buchi]:
    """phi | psi, retried until strictly weaker than phi."""
    psi_cfg = _psi_config(cfg)
    for _ in range(cfg.retry_cap):
        psi = random_formula(psi_cfg, rng)
        candidate = or_(phi, psi)
        try:
            if holds(candidate, phi, node_budget=_NODE_BUDGET):
                continue  # not strictly weaker
            return candidate, _translate_capped(candidate, cfg.max_states)
        except (_MakerFailed, TranslationBudgetError):
            continue
    raise _MakerFailed("reverse implicant retries exhausted")


def _psi_config(cfg: DatasetConfig) -> GenConfig:
    # Half the spec size keeps the derived automata comparable to the base one.
    return GenConfig(
        size=max(1, cfg.gen.size // 2),
        n_vars=cfg.gen.n_vars,
        weights=cfg.gen.weights,
    )


def _oracle_label(scenario: str, phi_src: Formula, phi: Formula) -> int:
    if scenario == "general":
        return int(holds(phi_src, phi, node_budget=_NODE_BUDGET))
    return int(equivalent(phi_src, phi, node_budget=_NODE_BUDGET))


def _spec_rng(seed: int, attempt: int) -> random.Random:
    return random.Random(f"{seed}:spec:{attempt}")


def _draw_spec(cfg: DatasetConfig, rng: random.Random) -> Formula | None:
    """One attempt at a usable spec: satisfiable, not valid, within caps."""
    phi = random_formula(cfg.gen, rng)
    if formula_length(phi) > cfg.max_len:
        return None
    try:
        base = _translate_capped(phi, cfg.max_states)
        empty, _ = is_empty(base)
        if empty:
            return None  # unsatisfiable
        if _lang_empty(not_(phi)):
            return None  # valid: no overlap or disjoint case exists
    except (_MakerFailed, TranslationBudgetError):
        return None
    return phi


def _zero_case(tag: str, phi: Formula, rng: random.Random, cfg: DatasetConfig):
    if tag == "strict-implication":
        return make_strict_implicant(phi, rng, cfg)
    if tag == "overlap":
        return make_overlap(phi, rng, cfg)
    if tag == "disjoint":
        return make_disjoint(phi, cfg.max_states)
    return make_reverse_implicant(phi, rng, cfg)


def generate_dataset(cfg: DatasetConfig) -> tuple[list[Sample], DatasetStats]:
    """Synthesize ``cfg.n_specs`` specification tuples with oracle-checked labels.

    A spec whose makers cannot all succeed is skipped whole (and logged), so the
    pairing arithmetic stays exact: 4 samples per spec in the general scenario
    with labels (1, 1, 0, 0), 2 per spec in the special scenario with labels
    (1, 0).  Splits assign whole specs, never individual samples, to ``test``.
    """
    samples: list[Sample] = []
    stats = DatasetStats()
    emitted = 0
    attempt = 0
    while emitted < cfg.n_specs:
        rng = _spec_rng(cfg.seed, attempt)
        attempt += 1
        phi = _draw_spec(cfg, rng)
        if phi is None:
            stats.skipped_specs += 1
            continue
        try:
            made = _make_tuple(phi, rng, cfg, emitted)
        except (_MakerFailed, TranslationBudgetError) as exc:
            stats.skipped_specs += 1
            log.info("skipping spec %s: %s", print_formula(phi), exc)
            continue
        split = "test" if _is_test_index(emitted, cfg.test_fraction) else "train"
        for phi_src, system, label, tag in made:
            sample = Sample(
                phi=phi,
                phi_src=phi_src,
                system=system,
                label=label,
                scenario_tag=tag,
                split=split,
            )
            samples.append(sample)
            stats.absorb(sample)
        emitted += 1
    return samples, stats


def _make_tuple(phi: Formula, rng: random.Random, cfg: DatasetConfig, emitted: int):
    made: list[tuple[Formula, Buchi, int, str]] = []
    if cfg.scenario == "general":
        cases = [
            ("equivalent", 1, make_equivalent(phi, cfg.max_states)),
            ("strict-implication", 1, make_strict_implicant(phi, rng, cfg)),
            ("overlap", 0, make_overlap(phi, rng, cfg)),
            ("disjoint", 0, make_disjoint(phi, cfg.max_states)),
        ]
    else:
        zero_tag = _SPECIAL_ZERO_ROTATION[emitted % len(_SPECIAL_ZERO_ROTATION)]
        cases = [
            ("equivalent", 1, make_equivalent(phi, cfg.max_states)),
            (zero_tag, 0, _zero_case(zero_tag, phi, rng, cfg)),
        ]
    for tag, label, (phi_src, system) in cases:
        verified = _oracle_label(cfg.scenario, phi_src, phi)
        if verified != label:
            raise DatasetError(
                f"oracle disagrees with construction for {tag}: "
                f"phi={print_formula(phi)} phi_src={print_formula(phi_src)}"
            )
        made.append((phi_src, system, label, tag))
    return made


def _is_test_index(i: int, fraction: float) -> bool:
    # Proportional assignment: spec i is a test spec when the running share of
    # test specs would otherwise fall below the requested fraction.
    return math.floor((i + 1) * fraction) > math.floor(i * fraction)


def write_jsonl(samples: list[Sample], path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        for sample in samples:
            fh.write(sample.to_json())
            fh.write("\n")


def read_jsonl(path) -> list[Sample]:
    samples = []
    with open(path, "r", encoding="utf-8") as fh:
        for i, line in enumerate(fh):
            if not line.strip():
                continue
            try:
                samples.append(Sample.from_json(line))
            except (DatasetError, ValueError, KeyError) as exc:
                raise DatasetError(f"line {i + 1}: {exc}") from exc
    return samples


def verify_sample(sample: Sample, scenario: str) -> bool:
    """Recheck the stored label against the classical oracle."""
    if scenario not in SCENARIOS:
        raise ValueError(f"scenario must be one of {SCENARIOS}")
    return _oracle_label(scenario, sample.phi_src, sample.phi) == sample.label


def infer_scenario(samples: list[Sample]) -> str:
    """Which scenario a dataset was generated for.

    Only strict-implication samples distinguish the two (label 1 in the general
    scenario, 0 in the special one); for datasets without any, the scenarios
    agree on every label and ``general`` is returned.
    """
    for sample in samples:
        if sample.scenario_tag == "strict-implication":
            return "general" if sample.label == 1 else "special"
    return "general"

"""Command-line entry point.

Subcommands: gen, train, eval, check, bench, encode, translate.  Every command
exits 0 on success and nonzero with a one-line diagnostic on error.  The seed
precedence is: --seed flag, then the OCTAL_SEED environment variable, then 0.
"""

from __future__ import annotations

import argparse
import os
import sys
from pathlib import Path

import numpy as np

from octal import __version__
from octal.automata import emit_hoa, equivalent, holds, parse_hoa, translate
from octal.bench import (
    bench_kernels,
    report_to_csv,
    run_benchmark,
    speedup_report,
)
from octal.datagen import (
    SCENARIOS,
    DatasetConfig,
    Sample,
    generate_dataset,
    infer_scenario,
    read_jsonl,
    write_jsonl,
)
from octal.graph import build_union_graph, dump_union_graph
from octal.ltl import GenConfig, parse_ltl, print_formula, to_nnf
from octal.neural import (
    MODEL_KINDS,
    TrainConfig,
    collate,
    encode_graph,
    encode_sample,
    evaluate,
    load_checkpoint,
    save_checkpoint,
    summarize,
    train_runs,
)


class CliError(Exception):
    pass


def _seed_value(args: argparse.Namespace) -> int:
    if args.seed is not None:
        return args.seed
    env = os.environ.get("OCTAL_SEED", "")
    if env:
        try:
            return int(env)
        except ValueError as exc:
            raise CliError(f"OCTAL_SEED must be an integer, got {env!r}") from exc
    return 0


def _check_output_path(path: str) -> Path:
    out = Path(path)
    if out.parent and not out.parent.is_dir():
        raise CliError(f"output directory does not exist: {out.parent}")
    return out


def _load_system(args: argparse.Namespace):
    """(system automaton, provenance formula or None) from the system flags."""
    if getattr(args, "system_formula", None):
        src = parse_ltl(args.system_formula)
        return translate(to_nnf(src)), src
    if getattr(args, "system_hoa", None):
        text = Path(args.system_hoa).read_text(encoding="utf-8")
        return parse_hoa(text), None
    raise CliError("provide a system via --system-formula or --system-hoa")


def _encoded_dataset(samples: list[Sample]):
    return [encode_sample(s) for s in samples]


def _select_split(samples: list[Sample], split: str) -> list[Sample]:
    if split == "all":
        return samples
    chosen = [s for s in samples if s.split == split]
    if not chosen:
        raise CliError(f"dataset has no samples in split {split!r}")
    return chosen


def _fmt_metrics(summary: dict[str, tuple[float, float]]) -> str:
    return "\n".join(
        f"{name} {mean:.6f} +- {std:.6f}" for name, (mean, std) in sorted(summary.items())
    )


def cmd_gen(args: argparse.Namespace) -> int:
    out = _check_output_path(args.out)
    cfg = DatasetConfig(
        scenario=args.scenario,
        n_specs=args.specs,
        gen=GenConfig(size=args.size, n_vars=args.vars),
        seed=_seed_value(args),
        test_fraction=args.test_fraction,
    )
    samples, stats = generate_dataset(cfg)
    write_jsonl(samples, out)
    print(
        f"wrote {stats.n_samples} samples to {out} "
        f"(skipped {stats.skipped_specs} specs; "
        f"len {stats.len_range}, states {stats.state_range}, "
        f"transitions {stats.transition_range})"
    )
    return 0


def cmd_train(args: argparse.Namespace) -> int:
    out = _check_output_path(args.out)
    samples = _select_split(read_jsonl(args.data), args.split)
    graphs = _encoded_dataset(samples)
    cfg = TrainConfig(
        model=args.model,
        lr=args.lr,
        batch_size=args.batch_size,
        max_epochs=args.epochs,
        patience=args.patience,
        val_fraction=args.val_fraction,
        seed=_seed_value(args),
        runs=args.runs,
        dropout=args.dropout,
    )
    results = train_runs(cfg, graphs)
    best = max(results, key=lambda r: r.val_metrics.accuracy)
    out.write_bytes(save_checkpoint(best.model))
    if args.history:
        lines = ["run,epoch,train_loss,val_acc"]
        for run_i, result in enumerate(results):
            for epoch, loss, acc in result.history:
                lines.append(f"{run_i},{epoch},{repr(loss)},{repr(acc)}")
        _check_output_path(args.history).write_text("\n".join(lines) + "\n", encoding="utf-8")
    summary = summarize([r.val_metrics for r in results])
    print(f"trained {args.model} on {len(graphs)} graphs, {cfg.runs} run(s)")
    print(_fmt_metrics(summary))
    print(f"checkpoint written to {out}")
    return 0


def cmd_eval(args: argparse.Namespace) -> int:
    samples = _select_split(read_jsonl(args.data), args.split)
    graphs = _encoded_dataset(samples)
    metrics = []
    for path in args.ckpt:
        model = load_checkpoint(Path(path).read_bytes())
        metrics.append(evaluate(model, graphs))
    summary = summarize(metrics)
    text = _fmt_metrics(summary)
    print(f"evaluated {len(args.ckpt)} checkpoint(s) on {len(graphs)} graphs ({args.split})")
    print(text)
    if args.out:
        header = "metric,mean,std"
        rows = [
            f"{name},{repr(mean)},{repr(std)}" for name, (mean, std) in sorted(summary.items())
        ]
        _check_output_path(args.out).write_text(
            "\n".join([header, *rows]) + "\n", encoding="utf-8"
        )
    return 0


def cmd_check(args: argparse.Namespace) -> int:
    if args.pairs:
        return _check_pairs(args)
    spec = parse_ltl(args.spec)
    system, src = _load_system(args)
    if args.engine == "classical":
        if src is None:
            raise CliError(
                "the classical engine needs a formula-backed system; use --system-formula"
            )
        if args.scenario == "general":
            verdict = int(holds(src, spec))
        else:
            verdict = int(equivalent(src, spec))
        print(verdict)
        return 0
    if not args.ckpt:
        raise CliError("the neural engine needs --ckpt")
    model = load_checkpoint(Path(args.ckpt).read_bytes())
    batch = collate([encode_graph(build_union_graph(system, to_nnf(spec)))])
    logit = float(model.forward(batch, train=False)[0])
    print(f"{int(logit > 0)} logit={logit:.6f}")
    return 0


def _check_pairs(args: argparse.Namespace) -> int:
    if not args.ckpt:
        raise CliError("--pairs comparison needs --ckpt")
    samples = read_jsonl(args.pairs)
    scenario = args.scenario or infer_scenario(samples)
    model = load_checkpoint(Path(args.ckpt).read_bytes())
    agree = 0
    for sample in samples:
        if scenario == "general":
            classical = int(holds(sample.phi_src, sample.phi))
        else:
            classical = int(equivalent(sample.phi_src, sample.phi))
        batch = collate([encode_sample(sample)])
        neural = int(float(model.forward(batch, train=False)[0]) > 0)
        agree += int(classical == neural)
    print(f"agreement {agree}/{len(samples)} = {agree / len(samples):.4f}")
    return 0


def cmd_bench(args: argparse.Namespace) -> int:
    if args.kernels:
        rows = bench_kernels()
        for kernel, backend, seconds in rows:
            print(f"{kernel:16s} {backend:10s} {seconds * 1e3:10.3f} ms")
        return 0
    if not (args.data and args.ckpt):
        raise CliError("bench needs --data and --ckpt (or --kernels)")
    samples = read_jsonl(args.data)
    if args.limit:
        samples = samples[: args.limit]
    scenario = args.scenario or infer_scenario(samples)
    model = load_checkpoint(Path(args.ckpt).read_bytes())
    records, accuracy = run_benchmark(model, samples, scenario)
    row = speedup_report(args.dataset_name, records)
    csv_text = report_to_csv([row])
    print(csv_text, end="")
    print(f"accuracy {accuracy:.4f}")
    if args.out:
        _check_output_path(args.out).write_text(csv_text, encoding="utf-8")
    return 0


def cmd_encode(args: argparse.Namespace) -> int:
    spec = to_nnf(parse_ltl(args.spec))
    system, _ = _load_system(args)
    text = dump_union_graph(build_union_graph(system, spec))
    if args.out:
        _check_output_path(args.out).write_text(text, encoding="utf-8")
    else:
        print(text, end="")
    return 0


def cmd_translate(args: argparse.Namespace) -> int:
    formula = to_nnf(parse_ltl(args.formula))
    print(emit_hoa(translate(formula)), end="")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="octal",
        description="LTL model checking as graph classification, "
        "with a classical checker as oracle and baseline.",
    )
    parser.add_argument("--version", action="version", version=f"octal {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("gen", help="synthesize a labeled dataset")
    p.add_argument("--scenario", choices=SCENARIOS, default="special")
    p.add_argument("--specs", type=int, default=100, help="number of specification tuples")
    p.add_argument("--size", type=int, default=15, help="target expression-tree size")
    p.add_argument("--vars", type=int, default=4, help="variable pool size")
    p.add_argument("--test-fraction", type=float, default=0.1)
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--out", required=True, help="output JSONL path")
    p.set_defaults(fn=cmd_gen)

    p = sub.add_parser("train", help="train a classifier")
    p.add_argument("--data", required=True)
    p.add_argument("--out", required=True, help="checkpoint path")
    p.add_argument("--model", choices=MODEL_KINDS, default="gin")
    p.add_argument("--lr", type=float, default=1e-5)
    p.add_argument("--batch-size", type=int, default=32)
    p.add_argument("--epochs", type=int, default=100)
    p.add_argument("--patience", type=int, default=5)
    p.add_argument("--val-fraction", type=float, default=0.2)
    p.add_argument("--dropout", type=float, default=0.1)
    p.add_argument("--runs", type=int, default=5)
    p.add_argument("--split", choices=("train", "test", "all"), default="train")
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--history", default=None, help="history CSV path")
    p.set_defaults(fn=cmd_train)

    p = sub.add_parser("eval", help="evaluate checkpoints on a dataset")
    p.add_argument("--data", required=True)
    p.add_argument("--ckpt", action="append", required=True)
    p.add_argument("--split", choices=("train", "test", "all"), default="test")
    p.add_argument("--out", default=None, help="metrics CSV path")
    p.add_argument("--seed", type=int, default=None)
    p.set_defaults(fn=cmd_eval)

    p = sub.add_parser("check", help="decide one (system, specification) pair")
    p.add_argument("--spec", help="specification formula")
    p.add_argument("--system-formula", help="system given as a formula")
    p.add_argument("--system-hoa", help="system given as a HOA file")
    p.add_argument("--engine", choices=("classical", "neural"), default="classical")
    p.add_argument("--scenario", choices=SCENARIOS, default="general")
    p.add_argument("--ckpt", default=None)
    p.add_argument("--pairs", default=None, help="JSONL file: report engine agreement")
    p.add_argument("--seed", type=int, default=None)
    p.set_defaults(fn=cmd_check)

    p = sub.add_parser("bench", help="classical vs neural timing")
    p.add_argument("--data", default=None)
    p.add_argument("--ckpt", default=None)
    p.add_argument("--scenario", choices=SCENARIOS, default=None)
    p.add_argument("--limit", type=int, default=None)
    p.add_argument("--dataset-name", default="dataset")
    p.add_argument("--out", default=None, help="report CSV path")
    p.add_argument("--kernels", action="store_true", help="compare kernel backends instead")
    p.add_argument("--seed", type=int, default=None)
    p.set_defaults(fn=cmd_bench)

    p = sub.add_parser("encode", help="dump the union graph of one pair")
    p.add_argument("--spec", required=True)
    p.add_argument("--system-formula")
    p.add_argument("--system-hoa")
    p.add_argument("--out", default=None)
    p.add_argument("--seed", type=int, default=None)
    p.set_defaults(fn=cmd_encode)

    p = sub.add_parser("translate", help="translate a formula to a HOA automaton")
    p.add_argument("formula")
    p.add_argument("--seed", type=int, default=None)
    p.set_defaults(fn=cmd_translate)

    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.fn(args)
    except (CliError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())

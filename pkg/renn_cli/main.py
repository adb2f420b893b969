"""
RENN CLI

Subcomandos:
    synth       gera o corpus sintético + regras + config de exemplo
    split       constrói o split de treino e grava o manifest
    annotate    anota sentenças com as regras (JSON lines)
    train       executa um experimento completo
    eval        avalia um checkpoint (--checkpoint) ou as regras (--reo)
    sweep       roda a grade variante x shots x seed e monta a tabela
    table       monta a grade modelo x shots a partir de report.json
    gradcheck   verifica os gradientes de todas as variantes

Uso:
    renn synth --out-dir data/synth
    renn train --config data/synth/config.json --variant two_both --shots 5 -v
    renn sweep --config data/synth/config.json --variants base feat two_both --seeds 1 2 3
    renn table runs
"""
import argparse
import json
import logging
import sys
from dataclasses import replace
from pathlib import Path
from typing import Optional

from rich.console import Console

from renn.types import ExperimentConfig, RunReport, SplitKind, Task, Variant
from renn.corpus import load_dataset, tokenize, write_manifest
from renn.rules import annotate, annotate_corpus, rule_stats
from renn.nn import NumericalError

from .events import EventBus
from .display import (
    RunDisplay, SweepDisplay, render_eval_report, render_gradcheck, render_rule_stats,
)
from .experiment import (
    evaluate_checkpoint, evaluate_rules_only, make_split, prepare, run_experiment,
)
from .synthetic import generate_synthetic
from .sweep import DEFAULT_SEEDS, DEFAULT_SHOTS, SweepGrid, load_reo, run_sweep
from .table import emit_table
from .verify import TOLERANCE, check_all_variants

logger = logging.getLogger(__name__)
console = Console()


def load_config(args: argparse.Namespace) -> ExperimentConfig:
    """Config do arquivo JSON com os overrides da linha de comando."""
    config = ExperimentConfig.from_json(args.config)
    overrides = {}
    if args.seed is not None:
        overrides["seed"] = args.seed
    if args.out_dir is not None:
        overrides["out_dir"] = args.out_dir
    if getattr(args, "task", None):
        overrides["task"] = Task(args.task)
    if getattr(args, "variant", None):
        overrides["variant"] = Variant(args.variant)
    if getattr(args, "shots", None) is not None:
        overrides["shots"] = args.shots if args.shots > 0 else None
    if getattr(args, "partial", False):
        overrides["partial"] = True
    if getattr(args, "span_level", False):
        overrides["span_level"] = True
    if getattr(args, "manifest", None):
        overrides["manifest_path"] = args.manifest
    if overrides:
        config = replace(config, **overrides)
    return config


# --- Subcomandos ---

def cmd_synth(args) -> int:
    out_dir = Path(args.out_dir or "data/synth")
    seed = args.seed if args.seed is not None else 1
    corpus = generate_synthetic(seed)
    paths = corpus.write(out_dir)
    config = ExperimentConfig(
        task=Task.INTENT,
        variant=Variant.BASE,
        shots=5,
        seed=seed,
        train_path=str(paths["train"]),
        test_path=str(paths["test"]),
        rules_path=str(paths["rules"]),
        macros_path=str(paths["macros"]),
        out_dir="runs",
    )
    config_path = out_dir / "config.json"
    config_path.write_text(json.dumps(config.to_dict(), indent=2) + "\n", encoding="utf-8")
    for name, path in {**paths, "config": config_path}.items():
        console.print(f"[green]{name:>7}[/green] {path}")
    return 0


def cmd_split(args) -> int:
    config = load_config(args)
    train_full = load_dataset(config.train_path, SplitKind.TRAIN)
    split = make_split(config, train_full)
    out = Path(args.output) if args.output else \
        Path(config.out_dir) / config.config_hash() / "split.json"
    manifest = write_manifest(split, config.seed, out)
    console.print(
        f"{config.shot_label} split: {len(manifest['selected_sentence_ids'])} of "
        f"{len(train_full)} sentences -> {out}"
    )
    return 0


def annotation_record(sid: int, tokens, ann) -> dict:
    return {
        "sid": sid,
        "tokens": list(tokens),
        "intent_tags": sorted([tag, pol.value] for tag, pol in ann.intent_tags),
        "slot_tags": [list(tags) for tags in ann.slot_tags],
        "indicators": ann.indicators.tolist(),
        "fired_rules": list(ann.fired_rules),
    }


def cmd_annotate(args) -> int:
    config = load_config(args)
    run = prepare(config)
    if args.stats:
        console.print(render_rule_stats(rule_stats(run.rules)))
        return 0
    if args.text:
        tokens = tokenize(args.text)
        if not tokens:
            raise ValueError("--text is empty")
        ann = annotate(run.rules, tokens, config.task, run.labels)
        sys.stdout.write(json.dumps(annotation_record(0, tokens, ann)) + "\n")
        return 0
    data = run.test if args.split == "test" else run.train_full
    annotations = annotate_corpus(run.rules, data, config.task, run.labels)
    lines = [
        json.dumps(annotation_record(sentence.sid, sentence.tokens, ann))
        for sentence, ann in zip(data, annotations)
    ]
    text = "\n".join(lines) + "\n"
    if args.output:
        Path(args.output).write_text(text, encoding="utf-8")
        console.print(f"{len(lines)} annotations -> {args.output}")
    else:
        sys.stdout.write(text)
    return 0


def cmd_train(args) -> int:
    config = load_config(args)
    bus = EventBus()
    RunDisplay(console).attach(bus)
    report = run_experiment(config, events=bus)
    console.print(f"[green]report:[/green] {Path(config.out_dir) / report.config_hash / 'report.json'}")
    return 0


def cmd_eval(args) -> int:
    config = load_config(args)
    if args.reo:
        report = evaluate_rules_only(config)
        console.print(render_eval_report(report, title="REO"))
        return 0
    if not args.checkpoint:
        raise ValueError("eval needs --checkpoint or --reo")
    report = evaluate_checkpoint(config, args.checkpoint)
    console.print(render_eval_report(report, title=str(args.checkpoint)))
    return 0


def _report_paths(items: list[str]) -> list[Path]:
    paths = []
    for item in items:
        p = Path(item)
        paths.extend(sorted(p.glob("*/report.json")) if p.is_dir() else [p])
    return paths


def print_grid(grid, text: bool) -> None:
    if text:
        sys.stdout.write(grid.to_text() + "\n")
    else:
        console.print(grid.to_rich())


def cmd_table(args) -> int:
    reports = [RunReport.from_json(p) for p in _report_paths(args.reports)]
    reo = None
    if reports:
        task = reports[0].config.task
        for item in args.reports:
            if Path(item).is_dir():
                reo = load_reo(item, task) or reo
    print_grid(emit_table(reports, reo), args.text)
    return 0


def cmd_sweep(args) -> int:
    config = load_config(args)
    grid = SweepGrid(
        variants=args.variants or list(Variant),
        shots=[k if k > 0 else None for k in (args.grid_shots or DEFAULT_SHOTS)],
        seeds=args.seeds or DEFAULT_SEEDS,
        partial=config.partial,
    )
    bus = EventBus()
    SweepDisplay(len(grid), console).attach(bus)
    result = run_sweep(config, grid, events=bus, with_reo=not args.no_reo)
    print_grid(emit_table(result.reports, result.reo), args.text)
    return 0


def cmd_gradcheck(args) -> int:
    seed = args.seed if args.seed is not None else 0
    results = check_all_variants(seed=seed)
    console.print(render_gradcheck(results, TOLERANCE))
    return 0 if all(err <= TOLERANCE for err in results.values()) else 1


# --- Parser ---

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=int, default=None, help="Override the config seed")
    common.add_argument("--out-dir", default=None, help="Output directory")
    common.add_argument("--verbose", "-v", action="store_true")

    with_config = argparse.ArgumentParser(add_help=False, parents=[common])
    with_config.add_argument("--config", "-c", required=True, help="Experiment config (JSON)")
    with_config.add_argument("--task", choices=[t.value for t in Task])
    with_config.add_argument("--variant", choices=[v.value for v in Variant])
    with_config.add_argument("--shots", type=int, help="k-shot (0 = full data)")
    with_config.add_argument("--partial", action="store_true", help="Partial few-shot (intent)")
    with_config.add_argument("--span-level", action="store_true", help="Span-level slot F1")
    with_config.add_argument("--manifest", help="Replay a split.json written by `renn split`")

    parser = argparse.ArgumentParser(prog="renn", description="Regex rules + BiLSTM for SLU")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("synth", parents=[common], help="Generate the synthetic corpus")
    p.set_defaults(func=cmd_synth)

    p = sub.add_parser("split", parents=[with_config], help="Build a split manifest")
    p.add_argument("--output", "-o", help="Manifest path")
    p.set_defaults(func=cmd_split)

    p = sub.add_parser("annotate", parents=[with_config], help="Annotate sentences with rules")
    p.add_argument("--split", choices=["train", "test"], default="train")
    p.add_argument("--output", "-o", help="Output JSON lines file")
    p.add_argument("--stats", action="store_true", help="Show rule complexity instead")
    p.add_argument("--text", help="Annotate one raw sentence instead of a split")
    p.set_defaults(func=cmd_annotate)

    p = sub.add_parser("train", parents=[with_config], help="Run an experiment")
    p.set_defaults(func=cmd_train)

    p = sub.add_parser("eval", parents=[with_config], help="Evaluate a checkpoint or the rules")
    p.add_argument("--checkpoint", help="model.json from a previous run")
    p.add_argument("--reo", action="store_true", help="Use rule output as the prediction")
    p.set_defaults(func=cmd_eval)

    p = sub.add_parser("sweep", parents=[with_config], help="Run a variant x shots x seed grid")
    p.add_argument("--variants", nargs="+", choices=[v.value for v in Variant],
                   help="Variants to run (default: all)")
    p.add_argument("--grid-shots", nargs="+", type=int,
                   help="k values (0 = full data; default: 5 10 20)")
    p.add_argument("--seeds", nargs="+", type=int, help="Seeds (default: 1 2 3 4 5)")
    p.add_argument("--no-reo", action="store_true", help="Skip the REO row")
    p.add_argument("--text", action="store_true", help="Plain tab-separated output")
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("table", parents=[common], help="Tabulate report.json files")
    p.add_argument("reports", nargs="+", help="report.json files or run directories")
    p.add_argument("--text", action="store_true", help="Plain tab-separated output")
    p.set_defaults(func=cmd_table)

    p = sub.add_parser("gradcheck", parents=[common], help="Check gradients of every variant")
    p.set_defaults(func=cmd_gradcheck)

    return parser


def run(argv: Optional[list[str]] = None) -> int:
    """Executa o CLI; retorna o código de saída."""
    args = build_parser().parse_args(argv)

    if args.verbose:
        logging.basicConfig(level=logging.INFO)
    else:
        logging.basicConfig(level=logging.WARNING)

    try:
        return args.func(args)
    except (ValueError, FileNotFoundError, KeyError, NumericalError) as e:
        console.print(f"[red]Error:[/red] {e}")
        return 1


def main():
    sys.exit(run())


if __name__ == "__main__":
    main()

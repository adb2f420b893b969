"""
Runner de experimentos

Pipeline de uma execução:
    split -> anotação com regras -> build_model -> treino -> avaliação no teste

Resultados em out_dir/<config-hash>/report.json (+ model.json).
"""
import json
import logging
import time
from dataclasses import dataclass
from pathlib import Path
from typing import Optional

from renn.types import (
    Dataset, ExperimentConfig, RunReport, Scope, SplitKind, Task,
)
from renn.corpus import (
    EmbeddingTable, Vocabulary, apply_manifest, dev_slice, few_shot_split_intent,
    few_shot_split_slot, load_dataset, load_embeddings, partial_few_shot_intent, read_manifest,
)
from renn.rules import CompiledRuleSet, compile_ruleset, derive_negatives
from renn.models import ExampleBuilder, LossWeights, RennModel, TagVocabulary, build_model
from renn.nn import load_checkpoint, save_checkpoint, seed_everything
from renn.training import Trainer, evaluate_model
from renn.evaluation import evaluate_reo

from .events import EventBus, EventType

logger = logging.getLogger(__name__)


@dataclass
class PreparedRun:
    """Tudo que uma execução precisa antes do treino."""
    config: ExperimentConfig
    train_full: Dataset
    train: Dataset
    test: Dataset
    vocab: Vocabulary
    rules: CompiledRuleSet
    labels: list[str]
    embeddings: EmbeddingTable


def check_inputs(config: ExperimentConfig) -> None:
    """Levanta FileNotFoundError para qualquer arquivo de entrada ausente."""
    required = {"train_path": config.train_path, "test_path": config.test_path,
                "rules_path": config.rules_path}
    for name, value in required.items():
        if not value:
            raise FileNotFoundError(f"config.{name} is not set")
    for path in config.input_files():
        if path and not Path(path).is_file():
            raise FileNotFoundError(f"input file not found: {path}")


def make_split(config: ExperimentConfig, train_full: Dataset) -> Dataset:
    """Split de treino da configuração (manifest gravado, completo, few-shot ou parcial)."""
    if config.manifest_path:
        manifest = read_manifest(config.manifest_path)
        if manifest["k"] != config.shots:
            logger.warning(
                f"Manifest {config.manifest_path} was built for k={manifest['k']}, "
                f"config has shots={config.shots}"
            )
        logger.info(f"Replaying split from {config.manifest_path} (seed {manifest['seed']})")
        return apply_manifest(train_full, manifest)
    if config.shots is None:
        return train_full
    if config.task is Task.INTENT:
        if config.partial:
            return partial_few_shot_intent(train_full, config.shots, config.seed)
        return few_shot_split_intent(train_full, config.shots, config.seed)
    return few_shot_split_slot(train_full, config.shots, config.seed)


def load_rules_for(config: ExperimentConfig, train_full: Dataset) -> CompiledRuleSet:
    rs = compile_ruleset(config.rules_path, config.macros_path or None)
    if config.derive_negatives:
        if config.task is Task.INTENT:
            rs = derive_negatives(rs, list(train_full.intent_labels), Scope.INTENT)
        else:
            rs = derive_negatives(rs, list(train_full.slot_types), Scope.SLOT)
    return rs


def prepare(config: ExperimentConfig) -> PreparedRun:
    """Carrega dados, regras, vocabulário e embeddings."""
    check_inputs(config)
    train_full = load_dataset(config.train_path, SplitKind.TRAIN)
    test = load_dataset(config.test_path, SplitKind.TEST)
    vocab = Vocabulary.build(train_full)
    train = make_split(config, train_full)
    rules = load_rules_for(config, train_full)
    labels = list(train_full.intent_labels if config.task is Task.INTENT else train_full.slot_labels)
    if config.embeddings_path:
        embeddings = load_embeddings(config.embeddings_path, vocab, seed=config.seed)
    else:
        embeddings = EmbeddingTable.random(vocab, config.hyper.embedding_dim, config.seed)
    return PreparedRun(config, train_full, train, test, vocab, rules, labels, embeddings)


def model_for(run: PreparedRun) -> RennModel:
    config = run.config
    return build_model(
        config.variant,
        config.task,
        vocab_size=len(run.vocab),
        labels=run.labels,
        tag_vocab=TagVocabulary.from_ruleset(run.rules, config.task),
        hyper=config.hyper,
        embeddings=run.embeddings.vectors,
        loss_weights=LossWeights(config.beta_p, config.beta_n),
        seed=config.seed,
    )


def run_experiment(
    config: ExperimentConfig,
    events: Optional[EventBus] = None,
    save: bool = True,
) -> RunReport:
    """
    Executa um experimento completo.

    Args:
        config: Configuração declarativa
        events: EventBus para progresso (opcional)
        save: Escreve report.json e model.json em out_dir/<hash>/

    Returns:
        RunReport
    """
    bus = events or EventBus()
    started = time.perf_counter()
    config_hash = config.config_hash()
    bus.emit_simple(EventType.RUN_START, config_hash=config_hash, task=config.task.value,
                    variant=config.variant.value, shots=config.shot_label, seed=config.seed)
    try:
        seed_everything(config.seed)
        run = prepare(config)
        bus.emit_simple(EventType.SPLIT_READY, train=len(run.train), test=len(run.test),
                        full=len(run.train_full))

        builder = ExampleBuilder(run.rules, run.vocab, config.task, run.labels)
        train_part, dev_part = run.train, None
        if not config.few_shot:
            train_part, dev_part = dev_slice(run.train, config.hyper.dev_fraction, config.seed)
        train_examples = builder.build_all(train_part)
        dev_examples = builder.build_all(dev_part) if dev_part is not None and len(dev_part) else None
        test_examples = builder.build_all(run.test)
        bus.emit_simple(EventType.ANNOTATION_DONE, rules=len(run.rules),
                        train=len(train_examples), test=len(test_examples))

        model = model_for(run)
        trainer = Trainer(model, config.hyper, epochs=config.epochs, seed=config.seed)
        trainer.on_epoch_end(lambda epoch, loss, score: bus.emit_simple(
            EventType.EPOCH_END, epoch=epoch, epochs=config.epochs, loss=loss, dev_score=score,
        ))
        bus.emit_simple(EventType.TRAIN_START, epochs=config.epochs, **model.describe())
        result = trainer.fit(train_examples, dev_examples)

        report = evaluate_model(model, test_examples, span_level=config.span_level)
        bus.emit_simple(EventType.EVAL_DONE, report=report)

        run_report = RunReport(
            config_hash=config_hash,
            config=config,
            eval=report,
            loss_curve=result.loss_curve,
            best_epoch=result.best_epoch,
        )
        if save:
            out = Path(config.out_dir) / config_hash
            checkpoint = save_checkpoint(model, out / "model.json", meta={
                "config_hash": config_hash, "labels": run.labels,
            })
            run_report.checkpoint_path = str(checkpoint)
        run_report.wall_time = time.perf_counter() - started
        if save:
            write_report(run_report, Path(config.out_dir) / config_hash / "report.json")

        logger.info(f"Run {config_hash} complete in {run_report.wall_time:.1f}s")
        bus.emit_simple(EventType.RUN_COMPLETE, report=run_report)
        return run_report
    except Exception as e:
        bus.emit_simple(EventType.RUN_ERROR, error=str(e))
        raise


def write_report(report: RunReport, path: Path) -> Path:
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(json.dumps(report.to_dict(), indent=2) + "\n", encoding="utf-8")
    return path


def evaluate_checkpoint(config: ExperimentConfig, checkpoint: str | Path):
    """Avalia um model.json salvo contra o conjunto de teste da configuração."""
    seed_everything(config.seed)
    run = prepare(config)
    model = model_for(run)
    load_checkpoint(model, checkpoint)
    builder = ExampleBuilder(run.rules, run.vocab, config.task, run.labels)
    return evaluate_model(model, builder.build_all(run.test), span_level=config.span_level)


def evaluate_rules_only(config: ExperimentConfig):
    """REO: as regras como preditor direto no conjunto de teste."""
    run = prepare(config)
    builder = ExampleBuilder(run.rules, run.vocab, config.task, run.labels)
    annotations = [builder.annotate(s) for s in run.test]
    return evaluate_reo(annotations, list(run.test), config.task, run.rules,
                        span_level=config.span_level, label_set=run.labels)

"""
Sweep - grade variante x shots x seed

Cada célula da grade é um run_experiment comum (report.json em
out_dir/<hash>/); o REO é avaliado uma vez e gravado em
out_dir/reo-<task>.json para a tabela.
"""
import json
import logging
from dataclasses import dataclass, field, replace
from pathlib import Path
from typing import Optional

from renn.types import EvalReport, ExperimentConfig, RunReport, Task, Variant

from .events import EventBus
from .experiment import evaluate_rules_only, run_experiment

logger = logging.getLogger(__name__)

DEFAULT_SHOTS = [5, 10, 20]
DEFAULT_SEEDS = [1, 2, 3, 4, 5]


@dataclass
class SweepGrid:
    """Eixos da grade; shots None = dados completos."""
    variants: list[Variant] = field(default_factory=lambda: list(Variant))
    shots: list[Optional[int]] = field(default_factory=lambda: list(DEFAULT_SHOTS))
    seeds: list[int] = field(default_factory=lambda: list(DEFAULT_SEEDS))
    partial: bool = False

    def __post_init__(self):
        self.variants = [Variant(v) for v in self.variants]
        if not self.variants or not self.shots or not self.seeds:
            raise ValueError("sweep grid needs at least one variant, shot setting and seed")

    def __len__(self) -> int:
        return len(self.variants) * len(self.shots) * len(self.seeds)

    def configs(self, base: ExperimentConfig) -> list[ExperimentConfig]:
        """Configs na ordem variante, shots, seed."""
        return [
            replace(base, variant=variant, shots=shots, seed=seed,
                    partial=self.partial and shots is not None, manifest_path=None)
            for variant in self.variants
            for shots in self.shots
            for seed in self.seeds
        ]


@dataclass
class SweepResult:
    reports: list[RunReport]
    reo: Optional[EvalReport] = None


def reo_path(out_dir: str | Path, task: Task) -> Path:
    return Path(out_dir) / f"reo-{task.value}.json"


def load_reo(out_dir: str | Path, task: Task) -> Optional[EvalReport]:
    """REO gravado por um sweep anterior (None se não houver)."""
    path = reo_path(out_dir, task)
    if not path.is_file():
        return None
    with open(path, encoding="utf-8") as f:
        return EvalReport.from_dict(json.load(f))


def run_sweep(
    base: ExperimentConfig,
    grid: SweepGrid,
    events: Optional[EventBus] = None,
    with_reo: bool = True,
) -> SweepResult:
    """
    Executa todas as configs da grade.

    Args:
        base: Config de partida (arquivos, tarefa, hiper-parâmetros)
        grid: Variantes, shots e seeds
        events: EventBus repassado a cada run_experiment
        with_reo: Avalia e grava o REO da tarefa

    Returns:
        SweepResult com os reports na ordem da grade
    """
    configs = grid.configs(base)
    logger.info(f"Sweep over {len(configs)} runs ({base.task.value})")
    reports = [run_experiment(config, events=events) for config in configs]

    reo = None
    if with_reo:
        reo = evaluate_rules_only(base)
        path = reo_path(base.out_dir, base.task)
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text(json.dumps(reo.to_dict(), indent=2) + "\n", encoding="utf-8")
        logger.info(f"REO report -> {path}")
    return SweepResult(reports, reo)

"""
Display RENN com Rich

Progresso dos epochs e resumo das métricas, alimentados pelo EventBus.
"""
from typing import Optional

from rich.console import Console
from rich.panel import Panel
from rich.progress import BarColumn, Progress, TaskID, TextColumn, TimeElapsedColumn
from rich.table import Table
from rich import box

from renn.types import EvalReport, Task

from .events import Event, EventBus, EventType


class RunDisplay:
    """Mostra o andamento de uma execução no terminal."""

    def __init__(self, console: Optional[Console] = None):
        self.console = console or Console()
        self._progress: Optional[Progress] = None
        self._task: Optional[TaskID] = None

    def attach(self, bus: EventBus) -> "RunDisplay":
        bus.subscribe(EventType.RUN_START, self._on_start)
        bus.subscribe(EventType.SPLIT_READY, self._on_split)
        bus.subscribe(EventType.TRAIN_START, self._on_train_start)
        bus.subscribe(EventType.EPOCH_END, self._on_epoch)
        bus.subscribe(EventType.RUN_COMPLETE, self._on_complete)
        bus.subscribe(EventType.RUN_ERROR, self._on_error)
        return self

    def _on_start(self, event: Event):
        d = event.data
        self.console.print(Panel(
            f"[bold]{d['task']}[/bold] / {d['variant']} / {d['shots']} / seed {d['seed']}",
            title=f"run {d['config_hash']}",
            border_style="blue",
        ))

    def _on_split(self, event: Event):
        d = event.data
        self.console.print(f"[dim]split: {d['train']} of {d['full']} train sentences, {d['test']} test[/dim]")

    def _on_train_start(self, event: Event):
        self._progress = Progress(
            TextColumn("[bold blue]training"),
            BarColumn(),
            TextColumn("{task.completed}/{task.total}"),
            TextColumn("loss {task.fields[loss]}"),
            TimeElapsedColumn(),
            console=self.console,
        )
        self._progress.start()
        self._task = self._progress.add_task("train", total=event.data["epochs"], loss="-")

    def _on_epoch(self, event: Event):
        if self._progress is None or self._task is None:
            return
        self._progress.update(self._task, completed=event.data["epoch"],
                              loss=f"{event.data['loss']:.4f}")

    def _stop(self):
        if self._progress is not None:
            self._progress.stop()
            self._progress = None

    def _on_complete(self, event: Event):
        self._stop()
        report = event.data["report"]
        self.console.print(render_eval_report(report.eval))
        if report.checkpoint_path:
            self.console.print(f"[dim]checkpoint: {report.checkpoint_path}[/dim]")

    def _on_error(self, event: Event):
        self._stop()


class SweepDisplay:
    """Uma linha por execução concluída de um sweep."""

    def __init__(self, total: int, console: Optional[Console] = None):
        self.console = console or Console()
        self.total = total
        self.done = 0

    def attach(self, bus: EventBus) -> "SweepDisplay":
        bus.subscribe(EventType.RUN_COMPLETE, self._on_complete)
        return self

    def _on_complete(self, event: Event):
        self.done += 1
        report = event.data["report"]
        ev = report.eval
        second = ev.accuracy if ev.task is Task.INTENT else ev.micro_f1
        c = report.config
        self.console.print(
            f"[dim][{self.done}/{self.total}][/dim] {c.variant.value:<9} {c.shot_label:<10} "
            f"seed {c.seed}  macroF1 {ev.macro_f1 * 100:.2f} / {(second or 0.0) * 100:.2f}"
        )


def render_eval_report(report: EvalReport, title: str = "evaluation") -> Table:
    """Tabela com as métricas agregadas e por label."""
    table = Table(title=title, box=box.SIMPLE)
    table.add_column("label")
    table.add_column("P", justify="right")
    table.add_column("R", justify="right")
    table.add_column("F1", justify="right")
    table.add_column("support", justify="right")
    for label, s in sorted(report.per_label.items()):
        table.add_row(label, f"{s.precision:.4f}", f"{s.recall:.4f}", f"{s.f1:.4f}", str(s.support))
    table.add_section()
    table.add_row("[bold]macro[/bold]", f"{report.macro_precision:.4f}",
                  f"{report.macro_recall:.4f}", f"{report.macro_f1:.4f}", "")
    if report.task is Task.INTENT:
        table.caption = f"accuracy {report.accuracy or 0.0:.4f}"
    else:
        level = "span" if report.span_level else "token"
        table.caption = f"micro-F1 ({level}) {report.micro_f1 or 0.0:.4f}"
    return table


def render_gradcheck(results: dict[str, float], tolerance: float) -> Table:
    """Erro relativo máximo por variante."""
    table = Table(title="gradient check", box=box.SIMPLE)
    table.add_column("model")
    table.add_column("max rel. error", justify="right")
    table.add_column("status")
    for name, err in results.items():
        status = "[green]ok[/green]" if err <= tolerance else "[red]FAIL[/red]"
        table.add_row(name, f"{err:.2e}", status)
    return table


def render_rule_stats(stats: dict) -> Table:
    table = Table(title="rules", box=box.SIMPLE)
    table.add_column("id")
    table.add_column("groups", justify="right")
    table.add_column("or-clauses", justify="right")
    table.add_column("tier")
    table.add_column("macros")
    for rule_id, s in stats["rules"].items():
        table.add_row(rule_id, str(s["group_count"]), str(s["or_clause_count"]), s["tier"],
                      " ".join(sorted(set(s["macros"]))))
    summary = stats["summary"]
    table.caption = (
        f"{summary['total']} rules, {summary['complex']} complex, "
        f"mean groups {summary['mean_group_count']:.2f}"
    )
    if summary["unused_macros"]:
        table.caption += f"; unused macros: {', '.join(summary['unused_macros'])}"
    return table

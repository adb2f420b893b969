"""
Tabela de resultados: modelos nas linhas, cenários (shots) nas colunas.

Células em porcentagem: "macroF1 / accuracy" para intent,
"macroF1 / microF1" para slot; "-" quando falta o resultado.
Cada célula é a média dos seeds.
"""
from collections import defaultdict
from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np
from rich.table import Table
from rich import box

from renn.types import EvalReport, ExperimentConfig, RunReport, Task, Variant

MISSING = "-"
REO_ROW = "REO"


@dataclass
class ResultGrid:
    """Grade modelo x cenário já formatada."""
    task: Task
    rows: list[str] = field(default_factory=list)
    columns: list[str] = field(default_factory=list)
    cells: dict[tuple[str, str], str] = field(default_factory=dict)

    def cell(self, row: str, column: str) -> str:
        return self.cells.get((row, column), MISSING)

    @property
    def header(self) -> str:
        return "macroF1 / accuracy" if self.task is Task.INTENT else "macroF1 / microF1"

    def to_rich(self) -> Table:
        table = Table(title=f"{self.task.value} ({self.header})", box=box.SIMPLE_HEAVY)
        table.add_column("model", style="bold")
        for column in self.columns:
            table.add_column(column, justify="center")
        for row in self.rows:
            table.add_row(row, *(self.cell(row, c) for c in self.columns))
        return table

    def to_text(self) -> str:
        """Versão texto (tab-separada) da grade."""
        lines = ["\t".join(["model"] + self.columns)]
        for row in self.rows:
            lines.append("\t".join([row] + [self.cell(row, c) for c in self.columns]))
        return "\n".join(lines)


def column_key(config: ExperimentConfig) -> tuple:
    """k-shot crescente, depois few-shot parcial, dados completos por último."""
    if config.shots is None:
        return (2, 0)
    return (1 if config.partial else 0, config.shots)


def cell_values(ev: EvalReport) -> tuple[float, float]:
    second = ev.accuracy if ev.task is Task.INTENT else ev.micro_f1
    return ev.macro_f1, second or 0.0


def format_cell(values: tuple[float, float]) -> str:
    return f"{values[0] * 100:.2f} / {values[1] * 100:.2f}"


def emit_table(reports: Sequence[RunReport], reo: Optional[EvalReport] = None) -> ResultGrid:
    """
    Monta a grade de resultados.

    Linhas na ordem das variantes (REO primeiro, quando informado) e
    colunas por k; reports da mesma célula (seeds) são promediados.

    Raises:
        ValueError: lista vazia ou reports de tarefas diferentes
    """
    if not reports:
        raise ValueError("no reports to tabulate")
    tasks = {r.config.task for r in reports}
    if reo is not None:
        tasks.add(reo.task)
    if len(tasks) > 1:
        raise ValueError(f"reports mix tasks: {sorted(t.value for t in tasks)}")

    grid = ResultGrid(task=tasks.pop())
    values: dict[tuple[str, str], list[tuple[float, float]]] = defaultdict(list)
    column_keys: dict[str, tuple] = {}
    for report in reports:
        column = report.config.shot_label
        column_keys[column] = column_key(report.config)
        values[(report.config.variant.value, column)].append(cell_values(report.eval))

    grid.columns = sorted(column_keys, key=column_keys.get)
    present = {row for row, _ in values}
    grid.rows = [v.value for v in Variant if v.value in present]
    for cell, items in values.items():
        grid.cells[cell] = format_cell(tuple(float(np.mean(x)) for x in zip(*items)))

    if reo is not None:
        grid.rows.insert(0, REO_ROW)
        for column in grid.columns:
            grid.cells[(REO_ROW, column)] = format_cell(cell_values(reo))
    return grid

"""
RENN CLI - experimentos pela linha de comando

Biblioteca do CLI do RENN com:
- Runner de experimentos (split, anotação, treino, avaliação)
- Sistema de eventos pub/sub
- Display de progresso com Rich
- Sweep da grade variante x shots x seed
- Tabela de resultados modelo x cenário
"""

from .events import EventBus, Event, EventType
from .display import RunDisplay, SweepDisplay
from .experiment import PreparedRun, evaluate_checkpoint, evaluate_rules_only, prepare, run_experiment
from .synthetic import SyntheticCorpus, generate_synthetic
from .sweep import SweepGrid, SweepResult, run_sweep
from .table import ResultGrid, emit_table
from .verify import check_all_variants

__all__ = [
    'EventBus',
    'Event',
    'EventType',
    'RunDisplay',
    'SweepDisplay',
    'PreparedRun',
    'evaluate_checkpoint',
    'evaluate_rules_only',
    'prepare',
    'run_experiment',
    'SyntheticCorpus',
    'generate_synthetic',
    'SweepGrid',
    'SweepResult',
    'run_sweep',
    'ResultGrid',
    'emit_table',
    'check_all_variants',
]

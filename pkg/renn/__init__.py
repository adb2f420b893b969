"""
RENN - Regras + Redes Neurais para SLU

Combina expressões regulares anotadas com um BiLSTM treinável para
detecção de intent e slot filling:
- Fusão na entrada (REtags como features)
- Fusão no módulo (atenção guiada por palavras-pista, two-side)
- Fusão na saída (logits somados ao indicador de match)
"""
from .types import (
    ABSTAIN,
    NONE_TAG,
    OUTSIDE,
    Dataset,
    EvalReport,
    ExperimentConfig,
    Granularity,
    HyperParams,
    LabelScores,
    MatchAnnotation,
    Polarity,
    RuleSpec,
    RunReport,
    Scope,
    Sentence,
    SplitKind,
    Task,
    Variant,
)

__version__ = "0.1.0"
__all__ = [
    "ABSTAIN",
    "NONE_TAG",
    "OUTSIDE",
    "Dataset",
    "EvalReport",
    "ExperimentConfig",
    "Granularity",
    "HyperParams",
    "LabelScores",
    "MatchAnnotation",
    "Polarity",
    "RuleSpec",
    "RunReport",
    "Scope",
    "Sentence",
    "SplitKind",
    "Task",
    "Variant",
]

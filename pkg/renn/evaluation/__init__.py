"""
Metrics - acurácia, macro/micro-F1 e avaliação direta das regras (REO)
"""
from .metrics import (
    accuracy,
    evaluate_intent,
    evaluate_slots,
    evaluation_labels,
    macro_f1,
    macro_scores,
    micro_f1,
    per_label_scores,
)
from .reo import evaluate_reo, reo_intent, reo_slots

__all__ = [
    "accuracy",
    "evaluate_intent",
    "evaluate_slots",
    "evaluation_labels",
    "macro_f1",
    "macro_scores",
    "micro_f1",
    "per_label_scores",
    "evaluate_reo",
    "reo_intent",
    "reo_slots",
]

"""
Métricas: acurácia, macro-F1, micro-F1 (nível de token) e F1 por span.

Convenções:
- P/R de um label com denominador zero valem 0
- macro-F1 = média harmônica de macro-P e macro-R
- O fica fora do micro pooling e do conjunto de labels do macro
"""
from typing import Optional, Sequence

from seqeval.metrics import classification_report

from ..types import ABSTAIN, OUTSIDE, EvalReport, LabelScores, Task


def _harmonic(p: float, r: float) -> float:
    return 2 * p * r / (p + r) if p + r > 0 else 0.0


def _check_lengths(pred: Sequence, gold: Sequence) -> None:
    if len(pred) != len(gold):
        raise ValueError(f"prediction/gold length mismatch: {len(pred)} vs {len(gold)}")


def accuracy(pred: Sequence[str], gold: Sequence[str]) -> float:
    """Fração de acertos exatos."""
    _check_lengths(pred, gold)
    if not gold:
        return 0.0
    return sum(p == g for p, g in zip(pred, gold)) / len(gold)


def per_label_scores(
    pred: Sequence[str],
    gold: Sequence[str],
    label_set: Sequence[str],
) -> dict[str, LabelScores]:
    """Precision/recall/F1/support de cada label do conjunto."""
    _check_lengths(pred, gold)
    scores = {}
    for label in label_set:
        tp = sum(1 for p, g in zip(pred, gold) if p == g == label)
        n_pred = sum(1 for p in pred if p == label)
        n_gold = sum(1 for g in gold if g == label)
        precision = tp / n_pred if n_pred else 0.0
        recall = tp / n_gold if n_gold else 0.0
        scores[label] = LabelScores(precision, recall, _harmonic(precision, recall), n_gold)
    return scores


def macro_scores(
    pred: Sequence[str],
    gold: Sequence[str],
    label_set: Sequence[str],
) -> tuple[float, float, float]:
    """(macro-P, macro-R, macro-F1)."""
    if not label_set:
        raise ValueError("macro_f1 needs a non-empty label set")
    scores = per_label_scores(pred, gold, label_set)
    p = sum(s.precision for s in scores.values()) / len(scores)
    r = sum(s.recall for s in scores.values()) / len(scores)
    return p, r, _harmonic(p, r)


def macro_f1(pred: Sequence[str], gold: Sequence[str], label_set: Sequence[str]) -> float:
    return macro_scores(pred, gold, label_set)[2]


def _flatten(pred_seqs, gold_seqs) -> tuple[list[str], list[str]]:
    _check_lengths(pred_seqs, gold_seqs)
    pred, gold = [], []
    for p, g in zip(pred_seqs, gold_seqs):
        _check_lengths(p, g)
        pred.extend(p)
        gold.extend(g)
    return pred, gold


def micro_f1(
    pred_seqs: Sequence[Sequence[str]],
    gold_seqs: Sequence[Sequence[str]],
    positive_label_set: Optional[Sequence[str]] = None,
) -> float:
    """
    Micro-F1 por token sobre os labels positivos (O excluído).

    Args:
        pred_seqs: Sequências preditas (alinhadas por token)
        gold_seqs: Sequências gold
        positive_label_set: Labels contados (default: todos exceto O)
    """
    pred, gold = _flatten(pred_seqs, gold_seqs)
    if positive_label_set is None:
        positive = {label for label in set(pred) | set(gold) if label != OUTSIDE}
    else:
        positive = set(positive_label_set) - {OUTSIDE}
    tp = sum(1 for p, g in zip(pred, gold) if p == g and g in positive)
    n_pred = sum(1 for p in pred if p in positive)
    n_gold = sum(1 for g in gold if g in positive)
    precision = tp / n_pred if n_pred else 0.0
    recall = tp / n_gold if n_gold else 0.0
    return _harmonic(precision, recall)


def evaluation_labels(pred: Sequence[str], gold: Sequence[str]) -> list[str]:
    """Labels presentes em gold ou pred, sem O e sem ABSTAIN."""
    return sorted((set(pred) | set(gold)) - {OUTSIDE, ABSTAIN})


def evaluate_intent(
    pred: Sequence[str],
    gold: Sequence[str],
    label_set: Optional[Sequence[str]] = None,
) -> EvalReport:
    """Acurácia, macro-P/R/F1 e scores por label para intents."""
    labels = list(label_set) if label_set is not None else evaluation_labels(pred, gold)
    p, r, f = macro_scores(pred, gold, labels)
    return EvalReport(
        task=Task.INTENT,
        accuracy=accuracy(pred, gold),
        macro_precision=p,
        macro_recall=r,
        macro_f1=f,
        per_label=per_label_scores(pred, gold, labels),
    )


def evaluate_slots(
    pred_seqs: Sequence[Sequence[str]],
    gold_seqs: Sequence[Sequence[str]],
    label_set: Optional[Sequence[str]] = None,
    span_level: bool = False,
) -> EvalReport:
    """
    Métricas de slot filling.

    Nível de token por padrão; com span_level=True usa spans BIO (seqeval),
    onde os labels são os tipos de slot.
    """
    if span_level:
        return _evaluate_spans(pred_seqs, gold_seqs)
    pred, gold = _flatten(pred_seqs, gold_seqs)
    labels = [x for x in label_set if x != OUTSIDE] if label_set is not None \
        else evaluation_labels(pred, gold)
    if not labels:
        return EvalReport(task=Task.SLOT, micro_f1=0.0)
    p, r, f = macro_scores(pred, gold, labels)
    return EvalReport(
        task=Task.SLOT,
        macro_precision=p,
        macro_recall=r,
        macro_f1=f,
        micro_f1=micro_f1(pred_seqs, gold_seqs, labels),
        per_label=per_label_scores(pred, gold, labels),
    )


def _evaluate_spans(pred_seqs, gold_seqs) -> EvalReport:
    pred, gold = _flatten(pred_seqs, gold_seqs)
    if all(label == OUTSIDE for label in pred + gold):
        return EvalReport(task=Task.SLOT, micro_f1=0.0, span_level=True)
    report = classification_report(
        [list(g) for g in gold_seqs],
        [list(p) for p in pred_seqs],
        output_dict=True,
        zero_division=0,
    )
    per_label = {
        label: LabelScores(
            float(v["precision"]), float(v["recall"]), float(v["f1-score"]), int(v["support"])
        )
        for label, v in report.items()
        if not label.endswith(" avg")
    }
    if not per_label:
        return EvalReport(task=Task.SLOT, micro_f1=0.0, span_level=True)
    macro_p = sum(s.precision for s in per_label.values()) / len(per_label)
    macro_r = sum(s.recall for s in per_label.values()) / len(per_label)
    return EvalReport(
        task=Task.SLOT,
        macro_precision=macro_p,
        macro_recall=macro_r,
        macro_f1=_harmonic(macro_p, macro_r),
        micro_f1=float(report["micro avg"]["f1-score"]),
        per_label=per_label,
        span_level=True,
    )

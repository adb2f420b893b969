"""
REO - avaliação usando a saída das regras diretamente como predição.
"""
import logging
from collections import Counter
from typing import Optional, Sequence

from ..types import ABSTAIN, OUTSIDE, EvalReport, MatchAnnotation, Polarity, Scope, Sentence, Task
from ..rules.compiler import CompiledRuleSet
from .metrics import evaluate_intent, evaluate_slots

logger = logging.getLogger(__name__)


def reo_intent(annotation: MatchAnnotation, rs: CompiledRuleSet) -> str:
    """
    Intent predito pelas regras.

    Entre as regras positivas que dispararam, vence a de maior número de
    grupos; empate pelo menor label em ordem lexicográfica. Sem regra: ABSTAIN.
    """
    candidates = []
    for rule_id in annotation.fired_rules:
        rule = rs.get(rule_id)
        if rule.scope is Scope.INTENT and rule.polarity is Polarity.POSITIVE:
            candidates.append((-rs.group_counts[rule_id], rule.retag))
    if not candidates:
        return ABSTAIN
    return min(candidates)[1]


def reo_slots(annotation: MatchAnnotation, label_set: Optional[Sequence[str]] = None) -> list[str]:
    """
    Tag mais frequente de cada token (empate lexicográfico); O quando não há tag.

    Com label_set, tags fora do conjunto (REtags simplificados como B-city)
    são ignoradas.
    """
    allowed = set(label_set) if label_set is not None else None
    out = []
    for tags in annotation.slot_tags:
        if allowed is not None:
            tags = tuple(t for t in tags if t in allowed)
        if not tags:
            out.append(OUTSIDE)
            continue
        counts = Counter(tags)
        out.append(min(counts, key=lambda t: (-counts[t], t)))
    return out


def evaluate_reo(
    annotations: Sequence[MatchAnnotation],
    gold: Sequence[Sentence],
    task: Task,
    rs: CompiledRuleSet,
    span_level: bool = False,
    label_set: Optional[Sequence[str]] = None,
) -> EvalReport:
    """
    Métricas das predições das regras contra o gold.

    Args:
        annotations: Uma MatchAnnotation por sentença (da tarefa correspondente)
        gold: Sentenças gold na mesma ordem
        task: INTENT ou SLOT
        rs: Regras usadas nas anotações
        span_level: Slot F1 por span
        label_set: Labels BIO aceitos como predição de slot

    Returns:
        EvalReport (ABSTAIN conta como erro)
    """
    if len(annotations) != len(gold):
        raise ValueError(f"{len(annotations)} annotations for {len(gold)} sentences")
    if Task(task) is Task.INTENT:
        pred = [reo_intent(a, rs) for a in annotations]
        abstained = sum(1 for p in pred if p == ABSTAIN)
        logger.info(f"REO intent: {abstained}/{len(pred)} sentences without a firing rule")
        return evaluate_intent(pred, [s.intent for s in gold])
    pred_seqs = [reo_slots(a, label_set) for a in annotations]
    return evaluate_slots(pred_seqs, [list(s.slots) for s in gold], span_level=span_level)

"""
Anotador - avalia as regras sobre uma sentença tokenizada

O matching roda sobre os tokens unidos por um espaço; um grupo marca
exatamente os tokens cujo span de caracteres está inteiro dentro do span
do grupo. Sobreposições parciais não geram nada.
"""
import logging
from dataclasses import dataclass
from typing import Iterable, Optional

import numpy as np

from ..types import (
    Granularity, MatchAnnotation, Polarity, RuleSpec, Scope, Task,
)
from .compiler import CompiledRuleSet

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class RuleMatch:
    """Um match de uma regra, já convertido para índices de token."""
    rule: RuleSpec
    groups: dict[int, tuple[int, ...]]   # grupo -> tokens cobertos (grupo 0 = match inteiro)

    def tokens(self, group: int) -> tuple[int, ...]:
        return self.groups.get(group, ())

    def tagged(self) -> list[tuple[str, tuple[int, ...]]]:
        """(tag, tokens) para cada grupo marcado da regra."""
        out = [(tag, self.tokens(g)) for g, tag in self.rule.group_tags]
        if self.rule.whole_match:
            out.append((self.rule.retag, self.tokens(0)))
        return [(tag, toks) for tag, toks in out if toks]

    def clue_tokens(self) -> set[int]:
        clues: set[int] = set()
        for g in self.rule.clue_groups:
            clues.update(self.tokens(g))
        return clues


def token_spans(tokens: list[str] | tuple[str, ...]) -> tuple[str, list[tuple[int, int]]]:
    """Texto unido por espaços e o span [início, fim) de cada token."""
    spans = []
    pos = 0
    for tok in tokens:
        spans.append((pos, pos + len(tok)))
        pos += len(tok) + 1
    return " ".join(tokens), spans


def covered_tokens(spans: list[tuple[int, int]], start: int, end: int) -> tuple[int, ...]:
    """Tokens cujo span está inteiro em [start, end)."""
    if start < 0 or end <= start:
        return ()
    return tuple(i for i, (s, e) in enumerate(spans) if s >= start and e <= end)


class Annotator:
    """
    Avalia um CompiledRuleSet sobre uma sentença.

    Os matches de cada pattern são calculados uma vez por sentença; regras
    negativas derivadas reutilizam os matches da regra de origem.
    """

    def __init__(self, rs: CompiledRuleSet, tokens: list[str] | tuple[str, ...]):
        self.rs = rs
        self.tokens = tuple(tokens)
        self.text, self.spans = token_spans(self.tokens)
        self._cache: dict[str, list[dict[int, tuple[int, ...]]]] = {}

    @property
    def n(self) -> int:
        return len(self.tokens)

    def _raw_matches(self, rule: RuleSpec) -> list[dict[int, tuple[int, ...]]]:
        key = rule.match_key
        if key not in self._cache:
            matcher = self.rs.matchers[rule.id]
            found = []
            for m in matcher.finditer(self.text):
                groups = {
                    g: covered_tokens(self.spans, *m.span(g))
                    for g in range(matcher.groups + 1)
                }
                found.append(groups)
            self._cache[key] = found
        return self._cache[key]

    def matches(self, scope: Scope, polarity: Optional[Polarity] = None) -> list[RuleMatch]:
        """Todos os matches das regras de um escopo, na ordem das regras."""
        out = []
        for rule in self.rs.by_scope(scope, polarity):
            out.extend(RuleMatch(rule, groups) for groups in self._raw_matches(rule))
        return out

    def fired(self, scope: Scope) -> list[str]:
        return [r.id for r in self.rs.by_scope(scope) if self._raw_matches(r)]

    # --- Intent ---

    def intent_tags(self) -> frozenset[tuple[str, Polarity]]:
        return frozenset(
            (m.rule.retag, m.rule.polarity) for m in self.matches(Scope.INTENT)
        )

    def intent_clue_mask(self, label_set: list[str], polarity: Polarity) -> np.ndarray:
        index = {label: k for k, label in enumerate(label_set)}
        marked: list[set[int]] = [set() for _ in label_set]
        for m in self.matches(Scope.INTENT, polarity):
            clues = m.clue_tokens()
            if not clues:
                continue
            for label in m.rule.targets_for(m.rule.retag):
                if label in index:
                    marked[index[label]].update(clues)
        return _normalized_rows(marked, self.n)

    def intent_indicators(self, label_set: list[str]) -> np.ndarray:
        z = np.zeros(len(label_set), dtype=np.float64)
        index = {label: k for k, label in enumerate(label_set)}
        for m in self.matches(Scope.INTENT, Polarity.POSITIVE):
            for label in m.rule.targets_for(m.rule.retag):
                if label in index:
                    z[index[label]] = 1.0
        return z

    # --- Slot ---

    def slot_tags(self) -> tuple[tuple[str, ...], ...]:
        per_token: list[list[str]] = [[] for _ in self.tokens]
        for m in self.matches(Scope.SLOT, Polarity.POSITIVE):
            for tag, toks in m.tagged():
                for j, i in enumerate(toks):
                    per_token[i].append(("B-" if j == 0 else "I-") + tag)
        return tuple(tuple(tags) for tags in per_token)

    def token_labels(self) -> list[set[str]]:
        """Labels alvo (sem BIO) que as regras positivas atribuem a cada token."""
        labels: list[set[str]] = [set() for _ in self.tokens]
        for m in self.matches(Scope.SLOT, Polarity.POSITIVE):
            for tag, toks in m.tagged():
                for i in toks:
                    labels[i].update(m.rule.targets_for(tag))
        return labels

    def slot_clue_mask(self, polarity: Polarity) -> np.ndarray:
        """
        Positiva: linha i = pistas das regras que marcam o token i.
        Negativa: linha i = pistas das regras negativas contra algum label
        que as positivas deram a i (evidência dos labels concorrentes).
        """
        marked: list[set[int]] = [set() for _ in self.tokens]
        if polarity is Polarity.POSITIVE:
            for m in self.matches(Scope.SLOT, Polarity.POSITIVE):
                clues = m.clue_tokens()
                for _, toks in m.tagged():
                    for i in toks:
                        marked[i].update(clues)
            return _normalized_rows(marked, self.n)

        own = self.token_labels()
        for m in self.matches(Scope.SLOT, Polarity.NEGATIVE):
            clues = m.clue_tokens()
            if not clues:
                continue
            against = {t for tag, _ in m.tagged() for t in m.rule.targets_for(tag)}
            for i, labels in enumerate(own):
                if labels & against:
                    marked[i].update(clues)
        return _normalized_rows(marked, self.n)

    def slot_indicators(self, label_set: list[str]) -> np.ndarray:
        z = np.zeros((self.n, len(label_set)), dtype=np.float64)
        index = {label: k for k, label in enumerate(label_set)}
        for m in self.matches(Scope.SLOT, Polarity.POSITIVE):
            for tag, toks in m.tagged():
                for j, i in enumerate(toks):
                    prefix = "B-" if j == 0 else "I-"
                    for target in m.rule.targets_for(tag):
                        k = index.get(prefix + target)
                        if k is not None:
                            z[i, k] = 1.0
        return z


def _normalized_rows(marked: list[set[int]], n: int) -> np.ndarray:
    """Linha k = 1/l_k nos tokens marcados; zero quando nada foi marcado."""
    t = np.zeros((len(marked), n), dtype=np.float64)
    for k, idx in enumerate(marked):
        if idx:
            t[k, sorted(idx)] = 1.0 / len(idx)
    return t


# --- API funcional ---

def annotate_intent(rs: CompiledRuleSet, tokens: list[str]) -> set[tuple[str, Polarity]]:
    """
    REtags de todas as regras de intent que casam com a sentença.

    Returns:
        Conjunto de (retag, polaridade); vazio quando nada casa
    """
    return set(Annotator(rs, tokens).intent_tags())


def annotate_slots(rs: CompiledRuleSet, tokens: list[str]) -> tuple[tuple[str, ...], ...]:
    """REtags BIO por token (multiconjunto; um token pode acumular tags de várias regras)."""
    return Annotator(rs, tokens).slot_tags()


def clue_mask(
    rs: CompiledRuleSet,
    tokens: list[str],
    label_set: list[str],
    polarity: Polarity = Polarity.POSITIVE,
) -> np.ndarray:
    """
    Alvo de atenção t [K x n] para intents.

    t_ki = 1/l_k nos l_k tokens-pista distintos das regras de k que casaram;
    linha zerada quando nenhuma regra de k marcou pista.
    """
    return Annotator(rs, tokens).intent_clue_mask(label_set, polarity)


def slot_clue_mask(
    rs: CompiledRuleSet,
    tokens: list[str],
    polarity: Polarity = Polarity.POSITIVE,
) -> np.ndarray:
    """
    Alvo de atenção [n x n] para slots.

    Positivo: linha i uniforme sobre as pistas das regras que marcam i.
    Negativo: linha i uniforme sobre as pistas das regras que depõem
    contra os labels atribuídos a i.
    """
    return Annotator(rs, tokens).slot_clue_mask(polarity)


def label_indicators(
    rs: CompiledRuleSet,
    tokens: list[str],
    target_labels: list[str],
    granularity: Granularity = Granularity.SENTENCE,
) -> np.ndarray:
    """
    Indicadores z de que ao menos uma regra positiva leva ao label.

    Args:
        target_labels: Intents (sentence) ou labels BIO de slot (token)
        granularity: SENTENCE -> z[K]; TOKEN -> z[n x K]
    """
    annotator = Annotator(rs, tokens)
    if Granularity(granularity) is Granularity.SENTENCE:
        return annotator.intent_indicators(target_labels)
    return annotator.slot_indicators(target_labels)


def annotate(
    rs: CompiledRuleSet,
    tokens: list[str],
    task: Task,
    labels: list[str],
) -> MatchAnnotation:
    """
    Anotação completa de uma sentença para uma tarefa.

    Args:
        rs: Regras compiladas
        tokens: Sentença tokenizada
        task: INTENT (labels = intents) ou SLOT (labels = labels BIO)
        labels: Conjunto de labels alvo

    Returns:
        MatchAnnotation
    """
    annotator = Annotator(rs, tokens)
    if Task(task) is Task.INTENT:
        return MatchAnnotation(
            intent_tags=annotator.intent_tags(),
            slot_tags=tuple(() for _ in annotator.tokens),
            clue_mask=annotator.intent_clue_mask(labels, Polarity.POSITIVE),
            negative_clue_mask=annotator.intent_clue_mask(labels, Polarity.NEGATIVE),
            indicators=annotator.intent_indicators(labels),
            fired_rules=tuple(annotator.fired(Scope.INTENT)),
        )
    return MatchAnnotation(
        intent_tags=frozenset(),
        slot_tags=annotator.slot_tags(),
        clue_mask=annotator.slot_clue_mask(Polarity.POSITIVE),
        negative_clue_mask=annotator.slot_clue_mask(Polarity.NEGATIVE),
        indicators=annotator.slot_indicators(labels),
        fired_rules=tuple(annotator.fired(Scope.SLOT)),
    )


def annotate_corpus(
    rs: CompiledRuleSet,
    sentences: Iterable,
    task: Task,
    labels: list[str],
) -> list[MatchAnnotation]:
    """Anota uma sequência de Sentences."""
    out = [annotate(rs, s.tokens, task, labels) for s in sentences]
    fired = sum(1 for a in out if a.fired_rules)
    logger.info(f"Annotated {len(out)} sentences ({fired} with at least one rule match)")
    return out

"""
Conversão de sentenças anotadas em tensores de treino.
"""
from dataclasses import dataclass
from typing import Optional

import torch

from ..types import MatchAnnotation, Polarity, Scope, Sentence, Task
from ..corpus.vocab import Vocabulary
from ..rules.compiler import CompiledRuleSet
from ..rules.annotator import annotate


@dataclass(frozen=True)
class TagVocabulary:
    """Tags de entrada conhecidas no momento da construção do modelo."""
    tags: tuple[str, ...]

    @classmethod
    def from_ruleset(cls, rs: CompiledRuleSet, task: Task) -> "TagVocabulary":
        """Intent: REtags positivos. Slot: B-/I- de cada REtag de slot positivo."""
        if Task(task) is Task.INTENT:
            tags = sorted({r.retag for r in rs.by_scope(Scope.INTENT, Polarity.POSITIVE)})
        else:
            tags = [f"{p}-{t}" for t in rs.slot_retags() for p in ("B", "I")]
        return cls(tags=tuple(tags))

    def __len__(self) -> int:
        return len(self.tags)


@dataclass
class Example:
    """Uma sentença pronta para o modelo."""
    token_ids: torch.Tensor                   # [n]
    gold: torch.Tensor                        # [] intent ou [n] slots; -1 = label fora do conjunto
    intent_tags: tuple[str, ...]              # REtags positivos (intent)
    slot_tags: tuple[tuple[str, ...], ...]    # multiconjunto BIO por token (slot)
    z: torch.Tensor                           # [K] ou [n x L]
    t_pos: torch.Tensor                       # [K x n] ou [n x n]
    t_neg: torch.Tensor
    sentence: Optional[Sentence] = None

    @property
    def length(self) -> int:
        return int(self.token_ids.shape[0])


class ExampleBuilder:
    """
    Anota sentenças com as regras e monta Examples.

    Args:
        rs: Regras compiladas (já com negativas derivadas, se for o caso)
        vocab: Vocabulário de tokens
        task: INTENT ou SLOT
        labels: Intents ou labels BIO de slot (saída do modelo)
        dtype: dtype dos tensores de ponto flutuante
    """

    def __init__(self, rs: CompiledRuleSet, vocab: Vocabulary, task: Task,
                 labels: list[str], dtype: torch.dtype = torch.float32):
        self.rs = rs
        self.vocab = vocab
        self.task = Task(task)
        self.labels = list(labels)
        self.index = {label: i for i, label in enumerate(self.labels)}
        self.dtype = dtype

    def annotate(self, sentence: Sentence) -> MatchAnnotation:
        return annotate(self.rs, list(sentence.tokens), self.task, self.labels)

    def build(self, sentence: Sentence, annotation: Optional[MatchAnnotation] = None) -> Example:
        ann = annotation or self.annotate(sentence)
        if self.task is Task.INTENT:
            gold = torch.tensor(self.index.get(sentence.intent, -1), dtype=torch.long)
            intent_tags = tuple(sorted(ann.positive_intent_tags))
        else:
            gold = torch.tensor([self.index.get(s, -1) for s in sentence.slots], dtype=torch.long)
            intent_tags = ()
        return Example(
            token_ids=torch.tensor(self.vocab.encode(sentence.tokens), dtype=torch.long),
            gold=gold,
            intent_tags=intent_tags,
            slot_tags=ann.slot_tags,
            z=torch.as_tensor(ann.indicators, dtype=self.dtype),
            t_pos=torch.as_tensor(ann.clue_mask, dtype=self.dtype),
            t_neg=torch.as_tensor(ann.negative_clue_mask, dtype=self.dtype),
            sentence=sentence,
        )

    def build_all(self, sentences) -> list[Example]:
        return [self.build(s) for s in sentences]

"""
RENN Types - Dataclasses compartilhadas

Define os tipos fundamentais usados em todo o framework:
- RuleSpec / MatchAnnotation: regras anotadas e o resultado de avaliá-las
- Sentence / Dataset: corpus tokenizado com intent e slots BIO
- HyperParams / ExperimentConfig: descrição declarativa de uma execução
- EvalReport / RunReport: métricas e resultado de uma execução
"""
from dataclasses import dataclass, field, asdict, fields
from enum import Enum
from pathlib import Path
from typing import Any, Optional
import hashlib
import json

import numpy as np


OUTSIDE = "O"             # label BIO fora de qualquer slot
NONE_TAG = "<none>"       # REtag reservado quando nenhuma regra dispara
ABSTAIN = "<abstain>"     # predição REO quando nenhuma regra de intent dispara


class Scope(Enum):
    """Escopo de uma regra."""
    INTENT = "intent"
    SLOT = "slot"


class Polarity(Enum):
    """Polaridade de uma regra (indica ou nega o label)."""
    POSITIVE = "positive"
    NEGATIVE = "negative"


class Task(Enum):
    """Tarefa de aprendizado."""
    INTENT = "intent"      # classificação de sentença
    SLOT = "slot"          # rotulação de sequência

    @property
    def scope(self) -> Scope:
        return Scope(self.value)


class Variant(Enum):
    """Variantes de modelo (nível de fusão com as regras)."""
    BASE = "base"            # BLSTM sem regras
    FEAT = "feat"            # REtags como features de entrada
    LOGIT = "logit"          # REtags somados aos logits de saída
    TWO = "two"              # atenção two-side sem loss de atenção
    TWO_POSI = "two_posi"    # + loss de atenção positiva
    TWO_NEG = "two_neg"      # + loss de atenção negativa
    TWO_BOTH = "two_both"    # + ambas as losses
    MIXED = "mixed"          # two_both + feat + logit

    @property
    def two_side(self) -> bool:
        return self in {
            Variant.TWO, Variant.TWO_POSI, Variant.TWO_NEG, Variant.TWO_BOTH, Variant.MIXED,
        }

    @property
    def uses_feat(self) -> bool:
        return self in {Variant.FEAT, Variant.MIXED}

    @property
    def uses_logit(self) -> bool:
        return self in {Variant.LOGIT, Variant.MIXED}

    @property
    def positive_loss(self) -> bool:
        return self in {Variant.TWO_POSI, Variant.TWO_BOTH, Variant.MIXED}

    @property
    def negative_loss(self) -> bool:
        return self in {Variant.TWO_NEG, Variant.TWO_BOTH, Variant.MIXED}


class Granularity(Enum):
    """Granularidade dos indicadores z."""
    SENTENCE = "sentence"
    TOKEN = "token"


class SplitKind(Enum):
    """Origem de um Dataset."""
    TRAIN = "train"
    TEST = "test"
    FEW_SHOT = "few_shot"
    PARTIAL_FEW_SHOT = "partial_few_shot"
    DEV = "dev"


# --- Regras ---

@dataclass(frozen=True)
class RuleSpec:
    """Uma expressão regular anotada."""
    id: str
    scope: Scope
    pattern: str
    retag: str
    polarity: Polarity = Polarity.POSITIVE
    group_tags: tuple[tuple[int, str], ...] = ()   # (grupo 1-based, tag)
    clue_groups: tuple[int, ...] = ()
    target_labels: tuple[str, ...] = ()            # ex: city -> fromloc.city, toloc.city
    whole_match: bool = False                      # slot: marca o match inteiro com retag
    source_id: Optional[str] = None                # regra positiva de origem (negativas derivadas)

    def __post_init__(self):
        if isinstance(self.scope, str):
            object.__setattr__(self, "scope", Scope(self.scope))
        if isinstance(self.polarity, str):
            object.__setattr__(self, "polarity", Polarity(self.polarity))

    @property
    def match_key(self) -> str:
        """Chave para reaproveitar matches (negativas derivadas usam a origem)."""
        return self.source_id or self.id

    def targets_for(self, tag: str) -> tuple[str, ...]:
        """Labels alvo de uma tag (a própria tag quando não há mapeamento)."""
        return self.target_labels if self.target_labels else (tag,)


@dataclass
class MatchAnnotation:
    """Resultado de avaliar todas as regras sobre uma sentença."""
    intent_tags: frozenset[tuple[str, Polarity]] = frozenset()
    slot_tags: tuple[tuple[str, ...], ...] = ()
    clue_mask: Optional[np.ndarray] = None           # t  [K x n] (intent) ou [n x n] (slot)
    negative_clue_mask: Optional[np.ndarray] = None
    indicators: Optional[np.ndarray] = None          # z  [K] ou [n x K]
    fired_rules: tuple[str, ...] = ()

    @property
    def positive_intent_tags(self) -> frozenset[str]:
        return frozenset(tag for tag, pol in self.intent_tags if pol is Polarity.POSITIVE)


# --- Corpus ---

@dataclass(frozen=True)
class Sentence:
    """Sentença tokenizada com intent e slots BIO."""
    tokens: tuple[str, ...]
    intent: str
    slots: tuple[str, ...]
    sid: int = 0

    def __post_init__(self):
        if len(self.tokens) != len(self.slots):
            raise ValueError(
                f"sentence {self.sid}: {len(self.tokens)} tokens but {len(self.slots)} slot labels"
            )


@dataclass(frozen=True)
class Dataset:
    """Coleção imutável de sentenças."""
    sentences: tuple[Sentence, ...]
    intent_labels: tuple[str, ...]
    slot_labels: tuple[str, ...]
    split: SplitKind = SplitKind.TRAIN
    shots: Optional[int] = None

    def __len__(self) -> int:
        return len(self.sentences)

    def __iter__(self):
        return iter(self.sentences)

    @property
    def ids(self) -> list[int]:
        return [s.sid for s in self.sentences]

    @property
    def slot_types(self) -> tuple[str, ...]:
        """Tipos de slot sem prefixo BIO (ex: fromloc.city)."""
        return tuple(sorted({label[2:] for label in self.slot_labels if label != OUTSIDE}))

    def subset(self, ids: set[int], split: SplitKind, shots: Optional[int] = None) -> "Dataset":
        """Subconjunto na ordem original; label sets preservados."""
        return Dataset(
            sentences=tuple(s for s in self.sentences if s.sid in ids),
            intent_labels=self.intent_labels,
            slot_labels=self.slot_labels,
            split=split,
            shots=shots,
        )


# --- Configuração ---

@dataclass
class HyperParams:
    """Hiper-parâmetros de treino."""
    batch_size: int = 16
    dropout: float = 0.5
    hidden_size: int = 100
    embedding_dim: int = 100
    tag_dim: int = 20
    lr: float = 0.001
    beta_p: Optional[float] = None    # None: 16 em few-shot completo, 1 nos demais
    beta_n: Optional[float] = None
    epochs: Optional[int] = None      # None: 100 em few-shot, 30 com dados completos
    clip_norm: float = 5.0
    fusion_init: float = 1.0
    freeze_fusion: bool = False
    dev_fraction: float = 0.1


@dataclass
class ExperimentConfig:
    """Descrição declarativa de uma execução."""
    task: Task = Task.INTENT
    variant: Variant = Variant.BASE
    shots: Optional[int] = None        # None: dados completos
    partial: bool = False              # few-shot parcial (top-3 intents com 300)
    seed: int = 1
    train_path: str = ""
    test_path: str = ""
    rules_path: str = ""
    macros_path: str = ""
    embeddings_path: Optional[str] = None
    manifest_path: Optional[str] = None   # split gravado por `renn split`; substitui o sorteio
    out_dir: str = "runs"
    derive_negatives: bool = True
    span_level: bool = False
    hyper: HyperParams = field(default_factory=HyperParams)

    def __post_init__(self):
        if isinstance(self.task, str):
            self.task = Task(self.task)
        if isinstance(self.variant, str):
            self.variant = Variant(self.variant)
        if isinstance(self.hyper, dict):
            known = {f.name for f in fields(HyperParams)}
            unknown = set(self.hyper) - known
            if unknown:
                raise ValueError(f"unknown hyper keys: {sorted(unknown)}")
            self.hyper = HyperParams(**self.hyper)
        if self.shots is not None and self.shots <= 0:
            raise ValueError(f"shots must be positive, got {self.shots}")
        if self.partial and self.task is not Task.INTENT:
            raise ValueError("partial few-shot is only defined for intent detection")

    @property
    def full_few_shot(self) -> bool:
        return self.shots is not None and not self.partial

    @property
    def few_shot(self) -> bool:
        return self.shots is not None

    @property
    def shot_label(self) -> str:
        """Rótulo da coluna na tabela de resultados."""
        if self.shots is None:
            return "full"
        return f"partial-{self.shots}" if self.partial else f"{self.shots}-shot"

    @property
    def beta_p(self) -> float:
        if self.hyper.beta_p is not None:
            return self.hyper.beta_p
        return 16.0 if self.full_few_shot else 1.0

    @property
    def beta_n(self) -> float:
        if self.hyper.beta_n is not None:
            return self.hyper.beta_n
        return 16.0 if self.full_few_shot else 1.0

    @property
    def epochs(self) -> int:
        if self.hyper.epochs is not None:
            return self.hyper.epochs
        return 100 if self.few_shot else 30

    def input_files(self) -> list[str]:
        files = [self.train_path, self.test_path, self.rules_path, self.macros_path]
        if self.embeddings_path:
            files.append(self.embeddings_path)
        if self.manifest_path:
            files.append(self.manifest_path)
        return files

    def to_dict(self) -> dict:
        data = asdict(self)
        data["task"] = self.task.value
        data["variant"] = self.variant.value
        return data

    @classmethod
    def from_dict(cls, data: dict[str, Any]) -> "ExperimentConfig":
        known = {f.name for f in fields(cls)}
        unknown = set(data) - known
        if unknown:
            raise ValueError(f"unknown config keys: {sorted(unknown)}")
        return cls(**data)

    @classmethod
    def from_json(cls, path: str | Path) -> "ExperimentConfig":
        with open(path, encoding="utf-8") as f:
            return cls.from_dict(json.load(f))

    def config_hash(self) -> str:
        """Hash reprodutível da configuração e do conteúdo dos arquivos de entrada."""
        data = self.to_dict()
        data.pop("out_dir", None)
        digest = hashlib.sha256(json.dumps(data, sort_keys=True).encode("utf-8"))
        for path in self.input_files():
            p = Path(path)
            if p.is_file():
                digest.update(hashlib.sha256(p.read_bytes()).digest())
        return digest.hexdigest()[:12]


# --- Resultados ---

@dataclass
class LabelScores:
    """Precision/recall/F1 de um label."""
    precision: float = 0.0
    recall: float = 0.0
    f1: float = 0.0
    support: int = 0


@dataclass
class EvalReport:
    """Métricas de uma avaliação."""
    task: Task = Task.INTENT
    accuracy: Optional[float] = None       # intent
    macro_precision: float = 0.0
    macro_recall: float = 0.0
    macro_f1: float = 0.0
    micro_f1: Optional[float] = None       # slot
    per_label: dict[str, LabelScores] = field(default_factory=dict)
    span_level: bool = False

    def __post_init__(self):
        if isinstance(self.task, str):
            self.task = Task(self.task)

    def to_dict(self) -> dict:
        data = asdict(self)
        data["task"] = self.task.value
        return data

    @classmethod
    def from_dict(cls, data: dict) -> "EvalReport":
        data = dict(data)
        data["per_label"] = {k: LabelScores(**v) for k, v in data.get("per_label", {}).items()}
        return cls(**data)


@dataclass
class RunReport:
    """Resultado de uma execução de experimento."""
    config_hash: str
    config: ExperimentConfig
    eval: EvalReport
    loss_curve: list[float] = field(default_factory=list)
    best_epoch: Optional[int] = None
    wall_time: float = 0.0
    checkpoint_path: Optional[str] = None

    def to_dict(self) -> dict:
        return {
            "config_hash": self.config_hash,
            "config": self.config.to_dict(),
            "eval": self.eval.to_dict(),
            "loss_curve": list(self.loss_curve),
            "best_epoch": self.best_epoch,
            "wall_time": self.wall_time,
            "checkpoint_path": self.checkpoint_path,
        }

    @classmethod
    def from_dict(cls, data: dict) -> "RunReport":
        return cls(
            config_hash=data["config_hash"],
            config=ExperimentConfig.from_dict(data["config"]),
            eval=EvalReport.from_dict(data["eval"]),
            loss_curve=list(data.get("loss_curve", [])),
            best_epoch=data.get("best_epoch"),
            wall_time=data.get("wall_time", 0.0),
            checkpoint_path=data.get("checkpoint_path"),
        )

    @classmethod
    def from_json(cls, path: str | Path) -> "RunReport":
        with open(path, encoding="utf-8") as f:
            return cls.from_dict(json.load(f))

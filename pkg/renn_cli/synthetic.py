"""
Gerador de corpus sintético (domínio de passagens aéreas)

Cada intent tem 4 templates; 3 são cobertos por regras de intent e 1 não,
então a avaliação REO acerta exatamente 3/4 das sentenças. As cidades
aparecem como fromloc.city, toloc.city e city_name, e uma regra
simplificada (REtag "city") leva aos três labels.
"""
import json
import logging
from dataclasses import dataclass
from pathlib import Path
from typing import Optional

import numpy as np

from renn.types import Dataset, Sentence, SplitKind
from renn.corpus.dataset import dataset_from_sentences, write_dataset

logger = logging.getLogger(__name__)

TRAIN_SIZE = 480
TEST_SIZE = 240

MACROS: dict[str, list[str]] = {
    "__CITY": [
        "boston", "denver", "miami", "dallas", "atlanta", "pittsburgh", "seattle",
        "new york", "san francisco", "st. louis",
    ],
    "__AIRLINE": ["delta", "united", "american", "continental", "us air"],
    "__DAY": ["monday", "tuesday", "wednesday", "thursday", "friday", "saturday", "sunday"],
    "__PERIOD": ["morning", "afternoon", "evening", "night"],
}

SLOT_OF = {
    "from": ("fromloc.city", "__CITY"),
    "to": ("toloc.city", "__CITY"),
    "city": ("city_name", "__CITY"),
    "airline": ("airline_name", "__AIRLINE"),
    "day": ("depart_date.day_name", "__DAY"),
    "period": ("depart_time.period_of_day", "__PERIOD"),
}

# o último template de cada intent não é coberto por nenhuma regra de intent
TEMPLATES: dict[str, list[str]] = {
    "flight": [
        "flights from {from} to {to}",
        "i want to fly from {from} to {to} on {day}",
        "list {airline} flights from {from} to {to} in the {period}",
        "show me the {period} trips from {from} to {to}",
    ],
    "airfare": [
        "how much is a ticket from {from} to {to}",
        "what is the fare to {to} on {day}",
        "cheapest fares from {from} to {to}",
        "what does it cost to go from {from} to {to}",
    ],
    "ground_service": [
        "what ground transportation is available in {city}",
        "i need a rental car in {city}",
        "is there limousine service in {city} on {day}",
        "how do i get downtown from the {city} airport",
    ],
    "airline": [
        "which airlines fly from {from} to {to}",
        "what airline is {airline}",
        "list the airlines that serve {city}",
        "who operates the {period} service to {to}",
    ],
}

RULES: list[dict] = [
    # intent (simple <= 2 grupos, complex >= 3)
    {"id": "r1", "scope": "intent", "retag": "flight",
     "pattern": r"(flights?)\sfrom\s(__CITY)\sto\s(__CITY)", "clue_groups": [1]},
    {"id": "r2", "scope": "intent", "retag": "flight", "pattern": r"(fly)\sfrom", "clue_groups": [1]},
    {"id": "r3", "scope": "intent", "retag": "flight",
     "pattern": r"list\s(__AIRLINE)\s(flights?)", "clue_groups": [2]},
    {"id": "a1", "scope": "intent", "retag": "airfare",
     "pattern": r"(how\smuch)\s(\w+\s){0,2}(ticket)", "clue_groups": [1, 3]},
    {"id": "a2", "scope": "intent", "retag": "airfare", "pattern": r"(fare)\sto", "clue_groups": [1]},
    {"id": "a3", "scope": "intent", "retag": "airfare",
     "pattern": r"(cheapest)\s(fares?)", "clue_groups": [1, 2]},
    {"id": "g1", "scope": "intent", "retag": "ground_service",
     "pattern": r"(ground\stransportation)", "clue_groups": [1]},
    {"id": "g2", "scope": "intent", "retag": "ground_service",
     "pattern": r"(rental\scar)\sin\s(__CITY)", "clue_groups": [1]},
    {"id": "g3", "scope": "intent", "retag": "ground_service",
     "pattern": r"(limousine)\s(service)", "clue_groups": [1, 2]},
    {"id": "l1", "scope": "intent", "retag": "airline",
     "pattern": r"^which\s(airlines?)\s(fly)\sfrom\s(__CITY)", "clue_groups": [1, 2]},
    {"id": "l2", "scope": "intent", "retag": "airline",
     "pattern": r"what\s(airline)\sis\s(__AIRLINE)", "clue_groups": [1]},
    {"id": "l3", "scope": "intent", "retag": "airline",
     "pattern": r"list\sthe\s(airlines)", "clue_groups": [1]},
    # slot
    {"id": "s1", "scope": "slot", "retag": "fromloc.city", "pattern": r"(from)\s(__CITY)",
     "group_tags": [[2, "fromloc.city"]], "clue_groups": [1]},
    {"id": "s2", "scope": "slot", "retag": "toloc.city", "pattern": r"(to)\s(__CITY)",
     "group_tags": [[2, "toloc.city"]], "clue_groups": [1]},
    {"id": "s3", "scope": "slot", "retag": "city_name", "pattern": r"(in)\s(__CITY)",
     "group_tags": [[2, "city_name"]], "clue_groups": [1]},
    {"id": "s4", "scope": "slot", "retag": "depart_date.day_name", "pattern": r"(on)\s(__DAY)",
     "group_tags": [[2, "depart_date.day_name"]], "clue_groups": [1]},
    {"id": "s5", "scope": "slot", "retag": "depart_time.period_of_day",
     "pattern": r"(in\sthe)\s(__PERIOD)",
     "group_tags": [[2, "depart_time.period_of_day"]], "clue_groups": [1]},
    {"id": "s6", "scope": "slot", "retag": "airline_name",
     "pattern": r"(list)\s(__AIRLINE)\s(flights?)\sfrom\s(__CITY)\sto\s(__CITY)",
     "group_tags": [[2, "airline_name"], [4, "fromloc.city"], [5, "toloc.city"]],
     "clue_groups": [1, 3]},
    {"id": "s7", "scope": "slot", "retag": "airline_name", "pattern": r"(is)\s(__AIRLINE)$",
     "group_tags": [[2, "airline_name"]], "clue_groups": [1]},
    {"id": "s8", "scope": "slot", "retag": "city", "pattern": r"(__CITY)",
     "group_tags": [[1, "city"]],
     "target_labels": ["fromloc.city", "toloc.city", "city_name"]},
]


@dataclass
class SyntheticCorpus:
    """Corpus sintético com suas regras e macros."""
    train: Dataset
    test: Dataset
    rules: list[dict]
    macros: dict[str, list[str]]

    def write(self, out_dir: str | Path) -> dict[str, Path]:
        """
        Escreve train.txt, test.txt, rules.jsonl e macros.json.

        Returns:
            Mapeamento nome -> caminho
        """
        out = Path(out_dir)
        out.mkdir(parents=True, exist_ok=True)
        paths = {
            "train": out / "train.txt",
            "test": out / "test.txt",
            "rules": out / "rules.jsonl",
            "macros": out / "macros.json",
        }
        write_dataset(self.train, paths["train"])
        write_dataset(self.test, paths["test"])
        paths["rules"].write_text(
            "".join(json.dumps(rule) + "\n" for rule in self.rules), encoding="utf-8"
        )
        paths["macros"].write_text(json.dumps(self.macros, indent=2) + "\n", encoding="utf-8")
        logger.info(f"Synthetic corpus written to {out}")
        return paths


def _fill(template: str, rng: np.random.Generator) -> Sentence:
    tokens: list[str] = []
    slots: list[str] = []
    used_cities: set[str] = set()
    for word in template.split():
        if not (word.startswith("{") and word.endswith("}")):
            tokens.append(word)
            slots.append("O")
            continue
        label, macro = SLOT_OF[word[1:-1]]
        choices = [w for w in MACROS[macro] if w not in used_cities]
        value = choices[int(rng.integers(len(choices)))]
        if macro == "__CITY":
            used_cities.add(value)
        parts = value.split()
        tokens.extend(parts)
        slots.extend([f"B-{label}"] + [f"I-{label}"] * (len(parts) - 1))
    intent = next(k for k, temps in TEMPLATES.items() if template in temps)
    return Sentence(tokens=tuple(tokens), intent=intent, slots=tuple(slots))


def _generate(n: int, rng: np.random.Generator) -> list[Sentence]:
    intents = list(TEMPLATES)
    sentences = []
    for i in range(n):
        intent = intents[i % len(intents)]
        temps = TEMPLATES[intent]
        template = temps[(i // len(intents)) % len(temps)]
        sentences.append(_fill(template, rng))
    return sentences


def generate_synthetic(
    seed: int = 1,
    train_size: int = TRAIN_SIZE,
    test_size: int = TEST_SIZE,
    out_dir: Optional[str | Path] = None,
) -> SyntheticCorpus:
    """
    Gera o corpus sintético.

    Args:
        seed: Seed do gerador (mesma seed -> arquivos idênticos)
        train_size: Sentenças de treino
        test_size: Sentenças de teste
        out_dir: Se informado, escreve os arquivos

    Returns:
        SyntheticCorpus
    """
    rng = np.random.default_rng(seed)
    train = dataset_from_sentences(_generate(train_size, rng), SplitKind.TRAIN)
    test = dataset_from_sentences(_generate(test_size, rng), SplitKind.TEST)
    corpus = SyntheticCorpus(
        train=train,
        test=test,
        rules=[dict(rule) for rule in RULES],
        macros={k: list(v) for k, v in MACROS.items()},
    )
    if out_dir is not None:
        corpus.write(out_dir)
    return corpus

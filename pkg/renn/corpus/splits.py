"""
Splits few-shot

- Intent: permutação aleatória por classe (uma vez por seed), prefixos de k
- Slot: labels da menor para a maior frequência, adicionando sentenças até
  cada label ter k menções; construído nível a nível (1..k) para que o
  split k1 contenha o split k2 < k1
- Parcial: os 3 intents mais frequentes recebem até 300 instâncias

Nenhuma função aqui lê ou altera o conjunto de teste.
"""
import json
import logging
from collections import Counter
from pathlib import Path
from typing import Optional

import numpy as np

from ..types import Dataset, SplitKind, OUTSIDE

logger = logging.getLogger(__name__)

PARTIAL_TOP = 3
PARTIAL_CAP = 300


def _check_k(k: int) -> None:
    if k <= 0:
        raise ValueError(f"k must be positive, got {k}")


def _class_permutations(ds: Dataset, seed: int) -> dict[str, list[int]]:
    """Ids de cada intent em ordem aleatória (seeded), labels em ordem lexicográfica."""
    rng = np.random.default_rng(seed)
    by_class: dict[str, list[int]] = {}
    for s in ds.sentences:
        by_class.setdefault(s.intent, []).append(s.sid)
    return {
        label: [by_class[label][i] for i in rng.permutation(len(by_class[label]))]
        for label in sorted(by_class)
    }


def few_shot_split_intent(ds: Dataset, k: int, seed: int) -> Dataset:
    """
    k instâncias por intent (todas, se houver menos que k).

    Args:
        ds: Dataset de treino
        k: Instâncias por classe
        seed: Seed da permutação por classe

    Returns:
        Dataset few-shot (ordem original preservada)
    """
    _check_k(k)
    selected: set[int] = set()
    for ids in _class_permutations(ds, seed).values():
        selected.update(ids[:k])
    out = ds.subset(selected, SplitKind.FEW_SHOT, shots=k)
    logger.info(f"Intent {k}-shot split (seed={seed}): {len(out)} of {len(ds)} sentences")
    return out


def partial_few_shot_intent(
    ds: Dataset,
    k: int,
    seed: int,
    top: int = PARTIAL_TOP,
    cap: int = PARTIAL_CAP,
) -> Dataset:
    """
    Few-shot parcial: os `top` intents mais frequentes recebem min(cap, disponível).

    Empates de frequência são resolvidos pela ordem lexicográfica.
    """
    _check_k(k)
    freq = Counter(s.intent for s in ds.sentences)
    frequent = {label for label, _ in sorted(freq.items(), key=lambda kv: (-kv[1], kv[0]))[:top]}
    selected: set[int] = set()
    for label, ids in _class_permutations(ds, seed).items():
        selected.update(ids[:cap] if label in frequent else ids[:k])
    out = ds.subset(selected, SplitKind.PARTIAL_FEW_SHOT, shots=k)
    logger.info(
        f"Partial intent {k}-shot split (seed={seed}, top={sorted(frequent)}): "
        f"{len(out)} of {len(ds)} sentences"
    )
    return out


def slot_mentions(slots: tuple[str, ...]) -> Counter:
    """Número de menções (spans B-) de cada tipo de slot em uma sentença."""
    return Counter(label[2:] for label in slots if label.startswith("B-"))


def few_shot_split_slot(ds: Dataset, k: int, seed: int) -> Dataset:
    """
    Split few-shot para slot filling.

    Itera os tipos de slot do mais raro ao mais frequente; enquanto um tipo
    tem menos de `level` menções, adiciona a próxima sentença (na permutação
    seeded daquele tipo) que o contém. Os níveis 1..k são processados em
    sequência, então o resultado para k2 é prefixo do processo para k1.

    Args:
        ds: Dataset de treino
        k: Menções por tipo de slot
        seed: Seed das permutações

    Returns:
        Dataset few-shot (ordem original preservada)
    """
    _check_k(k)
    mentions = {s.sid: slot_mentions(s.slots) for s in ds.sentences}
    total: Counter = Counter()
    for m in mentions.values():
        total.update(m)
    order = sorted(total, key=lambda label: (total[label], label))

    rng = np.random.default_rng(seed)
    candidates: dict[str, list[int]] = {}
    for label in sorted(total):
        ids = [s.sid for s in ds.sentences if mentions[s.sid][label] > 0]
        candidates[label] = [ids[i] for i in rng.permutation(len(ids))]

    selected: set[int] = set()
    count: Counter = Counter()
    cursor = {label: 0 for label in order}
    for level in range(1, k + 1):
        for label in order:
            pool = candidates[label]
            while count[label] < level and cursor[label] < len(pool):
                sid = pool[cursor[label]]
                cursor[label] += 1
                if sid in selected:
                    continue
                selected.add(sid)
                count.update(mentions[sid])

    out = ds.subset(selected, SplitKind.FEW_SHOT, shots=k)
    logger.info(f"Slot {k}-shot split (seed={seed}): {len(out)} of {len(ds)} sentences")
    return out


def dev_slice(ds: Dataset, fraction: float, seed: int) -> tuple[Dataset, Dataset]:
    """
    Separa uma fatia de validação do treino (seleção do melhor epoch).

    Returns:
        (treino restante, fatia de validação)
    """
    if not 0.0 < fraction < 1.0:
        raise ValueError(f"dev fraction must be in (0, 1), got {fraction}")
    n_dev = int(round(len(ds) * fraction))
    if len(ds) < 2 or n_dev == 0:
        return ds, ds.subset(set(), SplitKind.DEV)
    rng = np.random.default_rng(seed)
    perm = rng.permutation(len(ds))
    dev_ids = {ds.sentences[i].sid for i in perm[:n_dev]}
    train_ids = set(ds.ids) - dev_ids
    return ds.subset(train_ids, ds.split, ds.shots), ds.subset(dev_ids, SplitKind.DEV)


# --- Manifests ---

def split_manifest(split: Dataset, seed: int, kind: Optional[str] = None) -> dict:
    """Descrição reprodutível de um split."""
    return {
        "k": split.shots,
        "seed": seed,
        "kind": kind or split.split.value,
        "selected_sentence_ids": sorted(split.ids),
    }


def write_manifest(split: Dataset, seed: int, path: str | Path, kind: Optional[str] = None) -> dict:
    manifest = split_manifest(split, seed, kind)
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(json.dumps(manifest, indent=2) + "\n", encoding="utf-8")
    return manifest


def read_manifest(path: str | Path) -> dict:
    with open(path, encoding="utf-8") as f:
        manifest = json.load(f)
    for key in ("k", "seed", "selected_sentence_ids"):
        if key not in manifest:
            raise ValueError(f"{path}: manifest missing '{key}'")
    return manifest


def apply_manifest(ds: Dataset, manifest: dict) -> Dataset:
    """Reconstrói um split a partir do manifest."""
    ids = set(manifest["selected_sentence_ids"])
    missing = ids - set(ds.ids)
    if missing:
        raise ValueError(f"manifest references unknown sentence ids: {sorted(missing)[:5]}")
    kind = SplitKind(manifest.get("kind", SplitKind.FEW_SHOT.value))
    return ds.subset(ids, kind, shots=manifest["k"])


def label_mention_counts(ds: Dataset) -> dict[str, int]:
    """Menções por tipo de slot no dataset (O excluído)."""
    total: Counter = Counter()
    for s in ds.sentences:
        total.update(slot_mentions(s.slots))
    total.pop(OUTSIDE, None)
    return dict(total)

"""
Pytest configuration and fixtures for RENN tests.
"""
import json
import pytest

# Add parent to path
import sys
from pathlib import Path
sys.path.insert(0, str(Path(__file__).parent.parent))

from renn.types import ExperimentConfig, HyperParams, Sentence, Task, Variant
from renn.corpus import dataset_from_sentences
from renn.rules import compile_rules, compile_ruleset
from renn.rules.compiler import _parse_rule
from renn_cli.events import EventType
from renn_cli.synthetic import generate_synthetic


# --- Synthetic Corpus ---

@pytest.fixture(scope="session")
def synthetic():
    """Synthetic corpus (seed 1) in memory."""
    return generate_synthetic(seed=1)


@pytest.fixture(scope="session")
def synth_files(synthetic, tmp_path_factory):
    """Synthetic corpus written to disk: {train, test, rules, macros} -> path."""
    out = tmp_path_factory.mktemp("synth")
    return synthetic.write(out)


@pytest.fixture(scope="session")
def synth_rules(synth_files):
    """Compiled synthetic rule set (positives only)."""
    return compile_ruleset(synth_files["rules"], synth_files["macros"])


# --- Config Fixtures ---

@pytest.fixture
def tiny_hyper():
    """Small dimensions and few epochs for fast training tests."""
    return HyperParams(embedding_dim=8, hidden_size=6, tag_dim=4, epochs=2)


@pytest.fixture
def config_factory(synth_files, tiny_hyper, tmp_path):
    """Factory for experiment configs over the synthetic corpus."""
    def _create(**overrides):
        data = dict(
            task=Task.INTENT,
            variant=Variant.BASE,
            shots=5,
            seed=1,
            train_path=str(synth_files["train"]),
            test_path=str(synth_files["test"]),
            rules_path=str(synth_files["rules"]),
            macros_path=str(synth_files["macros"]),
            out_dir=str(tmp_path / "runs"),
            hyper=tiny_hyper,
        )
        data.update(overrides)
        return ExperimentConfig(**data)
    return _create


@pytest.fixture
def config_file(config_factory, tmp_path):
    """Synthetic intent config written as JSON."""
    path = tmp_path / "config.json"
    path.write_text(json.dumps(config_factory().to_dict()), encoding="utf-8")
    return path


# --- Rule Helpers ---

def make_rules(rule_dicts: list[dict], macros: dict | None = None):
    """Compile rules given as JSON-like dicts."""
    rules = [_parse_rule(obj, i + 1) for i, obj in enumerate(rule_dicts)]
    table = {k: tuple(v) for k, v in (macros or {}).items()}
    return compile_rules(rules, table)


@pytest.fixture
def rules_factory():
    """Factory to compile rules from dicts."""
    return make_rules


@pytest.fixture
def rule_file(tmp_path):
    """Write rule dicts as JSON lines; returns the path."""
    def _write(rule_dicts: list[dict], name: str = "rules.jsonl") -> Path:
        path = tmp_path / name
        path.write_text("".join(json.dumps(r) + "\n" for r in rule_dicts), encoding="utf-8")
        return path
    return _write


# --- Corpus Helpers ---

def make_sentence(text: str, intent: str, slots: list[str] | None = None) -> Sentence:
    tokens = tuple(text.split())
    return Sentence(tokens=tokens, intent=intent, slots=tuple(slots or ["O"] * len(tokens)))


@pytest.fixture
def dataset_factory():
    """Factory to build a Dataset from (text, intent[, slots]) tuples."""
    def _create(items):
        return dataset_from_sentences([make_sentence(*item) for item in items])
    return _create


# --- Event Helpers ---

def record_events(bus) -> list:
    """Subscribe to every event type; returns the list events are appended to."""
    events: list = []
    for event_type in EventType:
        bus.subscribe(event_type, events.append)
    return events

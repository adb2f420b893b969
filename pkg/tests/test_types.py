"""
Tests for renn/types.py
"""
import pytest
from renn.types import (
    Dataset, EvalReport, ExperimentConfig, HyperParams, LabelScores, Polarity, RuleSpec,
    RunReport, Scope, Sentence, SplitKind, Task, Variant,
)


class TestVariant:
    """Tests for Variant enum."""

    def test_values(self):
        assert [v.value for v in Variant] == [
            "base", "feat", "logit", "two", "two_posi", "two_neg", "two_both", "mixed",
        ]

    def test_two_side_family(self):
        two = {v for v in Variant if v.two_side}
        assert two == {Variant.TWO, Variant.TWO_POSI, Variant.TWO_NEG, Variant.TWO_BOTH, Variant.MIXED}

    def test_attention_losses(self):
        assert not Variant.TWO.positive_loss and not Variant.TWO.negative_loss
        assert Variant.TWO_POSI.positive_loss and not Variant.TWO_POSI.negative_loss
        assert Variant.TWO_NEG.negative_loss and not Variant.TWO_NEG.positive_loss
        assert Variant.TWO_BOTH.positive_loss and Variant.TWO_BOTH.negative_loss

    def test_mixed_combines_all_levels(self):
        """Mixed should use input, module and output fusion."""
        m = Variant.MIXED
        assert m.uses_feat and m.uses_logit and m.two_side
        assert m.positive_loss and m.negative_loss

    def test_base_uses_no_rules(self):
        b = Variant.BASE
        assert not (b.uses_feat or b.uses_logit or b.two_side)


class TestTask:
    """Tests for Task enum."""

    def test_scope(self):
        assert Task.INTENT.scope is Scope.INTENT
        assert Task.SLOT.scope is Scope.SLOT


class TestRuleSpec:
    """Tests for RuleSpec dataclass."""

    def test_string_enums_coerced(self):
        """RuleSpec should convert string scope/polarity to enums."""
        rule = RuleSpec(id="r", scope="intent", pattern="x", retag="flight", polarity="negative")
        assert rule.scope is Scope.INTENT
        assert rule.polarity is Polarity.NEGATIVE

    def test_targets_default_to_tag(self):
        rule = RuleSpec(id="r", scope=Scope.SLOT, pattern="(x)", retag="city")
        assert rule.targets_for("city") == ("city",)

    def test_targets_mapping(self):
        rule = RuleSpec(id="r", scope=Scope.SLOT, pattern="(x)", retag="city",
                        target_labels=("fromloc.city", "toloc.city"))
        assert rule.targets_for("city") == ("fromloc.city", "toloc.city")

    def test_match_key_uses_source(self):
        rule = RuleSpec(id="r!neg:a", scope=Scope.INTENT, pattern="x", retag="a", source_id="r")
        assert rule.match_key == "r"


class TestSentence:
    """Tests for Sentence dataclass."""

    def test_length_mismatch(self):
        with pytest.raises(ValueError):
            Sentence(tokens=("a", "b"), intent="x", slots=("O",))


class TestDataset:
    """Tests for Dataset dataclass."""

    def test_slot_types(self):
        ds = Dataset(
            sentences=(),
            intent_labels=(),
            slot_labels=("B-toloc.city", "I-toloc.city", "O", "B-airline_name"),
        )
        assert ds.slot_types == ("airline_name", "toloc.city")

    def test_subset_keeps_order_and_labels(self, dataset_factory):
        ds = dataset_factory([("a b", "x"), ("c", "y"), ("d e", "x")])
        sub = ds.subset({2, 0}, SplitKind.FEW_SHOT, shots=1)
        assert sub.ids == [0, 2]
        assert sub.intent_labels == ds.intent_labels
        assert sub.split is SplitKind.FEW_SHOT
        assert sub.shots == 1


class TestExperimentConfig:
    """Tests for ExperimentConfig dataclass."""

    def test_string_fields_coerced(self):
        config = ExperimentConfig(task="slot", variant="two_both", hyper={"hidden_size": 7})
        assert config.task is Task.SLOT
        assert config.variant is Variant.TWO_BOTH
        assert config.hyper.hidden_size == 7

    def test_non_positive_shots(self):
        with pytest.raises(ValueError):
            ExperimentConfig(shots=0)

    def test_partial_only_for_intent(self):
        with pytest.raises(ValueError):
            ExperimentConfig(task=Task.SLOT, shots=5, partial=True)

    def test_shot_labels(self):
        assert ExperimentConfig().shot_label == "full"
        assert ExperimentConfig(shots=10).shot_label == "10-shot"
        assert ExperimentConfig(shots=5, partial=True).shot_label == "partial-5"

    def test_attention_weight_defaults(self):
        """Full few-shot should weight the attention losses with 16, other settings with 1."""
        assert ExperimentConfig(shots=5).beta_p == 16.0
        assert ExperimentConfig(shots=5).beta_n == 16.0
        assert ExperimentConfig(shots=5, partial=True).beta_p == 1.0
        assert ExperimentConfig().beta_n == 1.0

    def test_explicit_weights_win(self):
        config = ExperimentConfig(shots=5, hyper=HyperParams(beta_p=2.0, beta_n=0.5))
        assert (config.beta_p, config.beta_n) == (2.0, 0.5)

    def test_epoch_defaults(self):
        assert ExperimentConfig(shots=20).epochs == 100
        assert ExperimentConfig().epochs == 30
        assert ExperimentConfig(hyper=HyperParams(epochs=3)).epochs == 3

    def test_unknown_keys_rejected(self):
        with pytest.raises(ValueError, match="unknown config keys"):
            ExperimentConfig.from_dict({"task": "intent", "learning_rate": 0.1})

    def test_unknown_hyper_keys_rejected(self):
        with pytest.raises(ValueError, match="unknown hyper keys.*hidden"):
            ExperimentConfig.from_dict({"task": "intent", "hyper": {"hidden": 5}})

    def test_dict_round_trip(self):
        config = ExperimentConfig(task=Task.SLOT, variant=Variant.FEAT, shots=10, seed=3)
        assert ExperimentConfig.from_dict(config.to_dict()) == config

    def test_hash_is_stable(self):
        assert ExperimentConfig(seed=2).config_hash() == ExperimentConfig(seed=2).config_hash()

    def test_hash_depends_on_config(self):
        assert ExperimentConfig(seed=2).config_hash() != ExperimentConfig(seed=3).config_hash()

    def test_hash_depends_on_manifest(self, tmp_path):
        manifest = tmp_path / "split.json"
        manifest.write_text('{"k": 5, "seed": 1, "selected_sentence_ids": [1]}')
        config = ExperimentConfig(shots=5)
        assert config.config_hash() != ExperimentConfig(shots=5, manifest_path=str(manifest)).config_hash()

    def test_hash_ignores_out_dir(self):
        assert ExperimentConfig(out_dir="a").config_hash() == ExperimentConfig(out_dir="b").config_hash()

    def test_hash_depends_on_file_content(self, tmp_path):
        data = tmp_path / "train.txt"
        data.write_text("a\tO\n#intent\tx\n")
        config = ExperimentConfig(train_path=str(data))
        before = config.config_hash()
        data.write_text("b\tO\n#intent\tx\n")
        assert config.config_hash() != before


class TestReports:
    """Tests for EvalReport / RunReport."""

    def test_run_report_from_dict(self):
        report = RunReport(
            config_hash="abc",
            config=ExperimentConfig(shots=5),
            eval=EvalReport(
                task=Task.INTENT, accuracy=0.5, macro_f1=0.4,
                per_label={"flight": LabelScores(0.5, 0.5, 0.5, 2)},
            ),
            loss_curve=[1.0, 0.5],
            best_epoch=2,
        )
        restored = RunReport.from_dict(report.to_dict())
        assert restored.eval.per_label["flight"].support == 2
        assert restored.config.shots == 5
        assert restored.loss_curve == [1.0, 0.5]

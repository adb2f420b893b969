"""
Tests for renn/evaluation/metrics.py
"""
import random

import pytest

from renn.types import ABSTAIN, Task
from renn.evaluation import (
    accuracy, evaluate_intent, evaluate_slots, evaluation_labels, macro_f1, macro_scores,
    micro_f1, per_label_scores,
)


class TestAccuracy:
    """Tests for accuracy."""

    def test_all_correct(self):
        assert accuracy(["a", "b"], ["a", "b"]) == 1.0

    def test_all_wrong(self):
        assert accuracy(["b", "a"], ["a", "b"]) == 0.0

    def test_partial(self):
        assert accuracy(["a", "a", "b", "c"], ["a", "a", "b", "b"]) == 0.75

    def test_length_mismatch(self):
        with pytest.raises(ValueError):
            accuracy(["a"], ["a", "b"])


class TestMacro:
    """Tests for macro-P/R/F1."""

    def test_two_labels(self):
        p, r, f = macro_scores(["A", "B", "B"], ["A", "A", "B"], ["A", "B"])
        assert (p, r) == (0.75, 0.75)
        assert f == pytest.approx(0.75)

    def test_absent_label_counts_zero(self):
        assert macro_f1(["A", "B", "B"], ["A", "A", "B"], ["A", "B", "C"]) == pytest.approx(0.5)

    def test_empty_label_set(self):
        with pytest.raises(ValueError):
            macro_f1(["A"], ["A"], [])

    def test_harmonic_of_macro_averages(self):
        """macro-F1 is the harmonic mean of macro-P and macro-R, not the mean of F1s."""
        pred, gold = ["A", "A", "A", "B"], ["A", "B", "B", "B"]
        scores = per_label_scores(pred, gold, ["A", "B"])
        p, r, f = macro_scores(pred, gold, ["A", "B"])
        assert p == pytest.approx((1 / 3 + 1.0) / 2)
        assert r == pytest.approx((1.0 + 1 / 3) / 2)
        assert f == pytest.approx(2 * p * r / (p + r))
        assert scores["B"].support == 3

    def test_permutation_invariant(self):
        rng = random.Random(0)
        labels = ["a", "b", "c"]
        pairs = [(rng.choice(labels), rng.choice(labels)) for _ in range(50)]
        before = evaluate_intent([p for p, _ in pairs], [g for _, g in pairs])
        rng.shuffle(pairs)
        after = evaluate_intent([p for p, _ in pairs], [g for _, g in pairs])
        assert before.macro_f1 == pytest.approx(after.macro_f1)
        assert before.accuracy == pytest.approx(after.accuracy)


class TestMicro:
    """Tests for micro_f1."""

    def test_pooled_counts(self):
        gold = [["B-a", "O", "B-b"], ["B-b", "B-a", "O"]]
        pred = [["B-a", "B-b", "O"], ["O", "B-a", "B-b"]]
        assert micro_f1(pred, gold) == pytest.approx(0.5)

    def test_outside_ignored(self):
        assert micro_f1([["O", "O"]], [["O", "O"]]) == 0.0

    def test_single_label_equals_macro(self):
        gold = [["B-a", "O", "B-a", "B-a"]]
        pred = [["B-a", "B-a", "O", "B-a"]]
        assert micro_f1(pred, gold, ["B-a"]) == pytest.approx(macro_f1(pred[0], gold[0], ["B-a"]))

    def test_sequence_length_mismatch(self):
        with pytest.raises(ValueError):
            micro_f1([["O"]], [["O", "O"]])


class TestEvaluate:
    """Tests for evaluate_intent / evaluate_slots."""

    def test_labels_exclude_outside_and_abstain(self):
        assert evaluation_labels(["a", ABSTAIN], ["b", "O"]) == ["a", "b"]

    def test_abstain_is_an_error(self):
        report = evaluate_intent(["a", ABSTAIN], ["a", "a"])
        assert report.accuracy == 0.5
        assert set(report.per_label) == {"a"}
        assert report.macro_precision == 1.0
        assert report.macro_recall == 0.5

    def test_token_level_slots(self):
        report = evaluate_slots([["B-a", "O"]], [["B-a", "O"]])
        assert report.task is Task.SLOT
        assert report.micro_f1 == 1.0
        assert report.accuracy is None

    def test_span_level_perfect(self):
        gold = [["B-city", "I-city", "O", "B-day"]]
        report = evaluate_slots(gold, gold, span_level=True)
        assert report.span_level
        assert report.micro_f1 == pytest.approx(1.0)
        assert set(report.per_label) == {"city", "day"}

    def test_span_level_partial_span_is_wrong(self):
        gold = [["B-city", "I-city", "O"]]
        pred = [["B-city", "O", "O"]]
        assert evaluate_slots(pred, gold, span_level=True).micro_f1 == 0.0

    def test_span_level_all_outside(self):
        assert evaluate_slots([["O", "O"]], [["O", "O"]], span_level=True).micro_f1 == 0.0


class TestModelLabelSet:
    """Macro averages over an explicit label set."""

    def test_unseen_label_counts_as_zero(self):
        pred, gold = ["a", "a"], ["a", "a"]
        assert evaluate_intent(pred, gold).macro_f1 == pytest.approx(1.0)
        report = evaluate_intent(pred, gold, label_set=["a", "b"])
        assert set(report.per_label) == {"a", "b"}
        assert report.per_label["b"].support == 0
        assert report.macro_f1 == pytest.approx(0.5)

    def test_slot_label_set_drops_outside(self):
        report = evaluate_slots([["B-a", "O"]], [["B-a", "O"]], label_set=["O", "B-a", "B-b"])
        assert set(report.per_label) == {"B-a", "B-b"}
        assert report.macro_f1 == pytest.approx(0.5)
        assert report.micro_f1 == pytest.approx(1.0)

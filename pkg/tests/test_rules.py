"""
Tests for renn/rules (macros, compiler, annotator).
"""
import re

import numpy as np
import pytest

from renn.types import Granularity, Polarity, Scope
from renn.rules import (
    MacroError, RuleError, annotate_intent, annotate_slots, clue_mask, compile_ruleset,
    derive_negatives, expand_macros, label_indicators, load_macros, load_rules, rule_stats,
    slot_clue_mask,
)

from tests.conftest import make_rules

FLIGHT = ("flight", Polarity.POSITIVE)


class TestMacros:
    """Tests for macro expansion."""

    def test_alternation(self):
        macros = {"__CITY": ("Boston", "Miami", "LA")}
        assert expand_macros("__CITY", macros) == "(?:Boston|Miami|LA)"

    def test_longest_word_first(self):
        macros = {"__CITY": ("york", "new york")}
        assert expand_macros("__CITY", macros) == r"(?:new\ york|york)"

    def test_no_macros_identity(self):
        assert expand_macros(r"flights?\sfrom", {}) == r"flights?\sfrom"

    def test_undefined_macro(self):
        with pytest.raises(MacroError, match="__FOO"):
            expand_macros(r"to\s__FOO", {"__CITY": ("boston",)})

    def test_dot_is_escaped(self):
        """'St. Louis' should only match literally."""
        rs = make_rules(
            [{"id": "c", "scope": "slot", "retag": "city", "pattern": "(__CITY)",
              "group_tags": [[1, "city"]]}],
            {"__CITY": ["st. louis"]},
        )
        assert annotate_slots(rs, ["st.", "louis"]) == (("B-city",), ("I-city",))
        assert annotate_slots(rs, ["stx", "louis"]) == ((), ())

    def test_group_numbering_unchanged(self):
        rs = make_rules(
            [{"id": "c", "scope": "slot", "retag": "x", "pattern": r"(__CITY)\s(to)",
              "group_tags": [[2, "x"]]}],
            {"__CITY": ["boston", "new york"]},
        )
        assert rs.group_counts["c"] == 2

    def test_load_macros_empty_file(self, tmp_path):
        path = tmp_path / "macros.json"
        path.write_text("")
        assert load_macros(path) == {}

    def test_invalid_macro_name(self, tmp_path):
        path = tmp_path / "macros.json"
        path.write_text('{"CITY": ["boston"]}')
        with pytest.raises(MacroError):
            load_macros(path)


class TestCompiler:
    """Tests for rule loading and compilation."""

    def test_spec_example_pattern(self, rule_file, tmp_path):
        rules = rule_file([{"id": "al", "scope": "intent", "retag": "airline",
                            "pattern": r"list(\sthe)?\s__AIRLINE"}])
        macros = tmp_path / "macros.json"
        macros.write_text('{"__AIRLINE": ["Delta", "United"]}')
        rs = compile_ruleset(rules, macros)
        tokens = "list the delta airlines flights to miami".split()
        assert annotate_intent(rs, tokens) == {("airline", Polarity.POSITIVE)}

    def test_empty_rule_file(self, tmp_path):
        path = tmp_path / "rules.jsonl"
        path.write_text("")
        rs = compile_ruleset(path)
        assert len(rs) == 0
        assert annotate_intent(rs, ["flights"]) == set()
        assert annotate_slots(rs, ["boston"]) == ((),)

    def test_group_out_of_range(self):
        with pytest.raises(RuleError, match="group 3"):
            make_rules([{"id": "s", "scope": "slot", "retag": "x", "pattern": r"(a)\s(b)",
                         "group_tags": [[3, "x"]]}])

    def test_clue_group_out_of_range(self):
        with pytest.raises(RuleError):
            make_rules([{"id": "i", "scope": "intent", "retag": "x", "pattern": r"(a)",
                         "clue_groups": [2]}])

    def test_invalid_pattern_names_rule_and_position(self):
        with pytest.raises(RuleError) as info:
            make_rules([{"id": "bad", "scope": "intent", "retag": "x", "pattern": "flights(from"}])
        assert info.value.rule_id == "bad"
        assert "position" in str(info.value)

    @pytest.mark.parametrize("pattern", [r"(a)\s\1", r"a(?=b)", r"(?<!a)b", r"(?P<x>a)(?P=x)"])
    def test_unsupported_constructs(self, pattern):
        with pytest.raises(RuleError):
            make_rules([{"id": "u", "scope": "intent", "retag": "x", "pattern": pattern}])

    def test_undefined_macro_names_macro(self):
        with pytest.raises(RuleError, match="__CITY"):
            make_rules([{"id": "m", "scope": "intent", "retag": "x", "pattern": r"to\s__CITY"}])

    def test_duplicate_ids(self, rule_file):
        rule = {"id": "r", "scope": "intent", "retag": "x", "pattern": "a"}
        with pytest.raises(RuleError, match="duplicate"):
            load_rules(rule_file([rule, rule]))

    def test_invalid_json_line(self, tmp_path):
        path = tmp_path / "rules.jsonl"
        path.write_text('{"id": "r", "scope": "intent", "retag": "x", "pattern": "a"}\n{oops\n')
        with pytest.raises(RuleError) as info:
            load_rules(path)
        assert info.value.line == 2

    def test_blank_lines_skipped(self, tmp_path):
        path = tmp_path / "rules.jsonl"
        path.write_text('\n{"id": "r", "scope": "intent", "retag": "x", "pattern": "a"}\n\n')
        assert [r.id for r in load_rules(path)] == ["r"]

    def test_slot_rule_without_tags(self):
        with pytest.raises(RuleError, match="whole_match"):
            make_rules([{"id": "s", "scope": "slot", "retag": "x", "pattern": "cheapest"}])

    def test_unknown_key(self):
        with pytest.raises(RuleError, match="unknown keys"):
            make_rules([{"id": "r", "scope": "intent", "retag": "x", "pattern": "a", "weight": 2}])

    def test_compile_is_deterministic(self, synth_files, synthetic):
        a = compile_ruleset(synth_files["rules"], synth_files["macros"])
        b = compile_ruleset(synth_files["rules"], synth_files["macros"])
        for s in list(synthetic.test)[:40]:
            assert annotate_intent(a, list(s.tokens)) == annotate_intent(b, list(s.tokens))
            assert annotate_slots(a, list(s.tokens)) == annotate_slots(b, list(s.tokens))


class TestAnnotateIntent:
    """Tests for intent annotation."""

    def test_multiple_tags(self):
        rs = make_rules(
            [
                {"id": "a", "scope": "intent", "retag": "airline",
                 "pattern": r"list(\sthe)?\s__AIRLINE"},
                {"id": "f", "scope": "intent", "retag": "flight", "pattern": r"flights?\sto"},
            ],
            {"__AIRLINE": ["delta", "united"]},
        )
        tokens = "list the delta airlines flights to miami".split()
        assert annotate_intent(rs, tokens) == {("airline", Polarity.POSITIVE), FLIGHT}

    def test_anchored_rule(self):
        rs = make_rules([{"id": "f", "scope": "intent", "retag": "flight",
                          "pattern": r"^flights?\sfrom"}])
        assert annotate_intent(rs, "flights from boston to miami".split()) == {FLIGHT}
        assert annotate_intent(rs, "show flights from boston".split()) == set()

    def test_no_match(self):
        rs = make_rules([{"id": "f", "scope": "intent", "retag": "flight", "pattern": "flights"}])
        assert annotate_intent(rs, "what is the fare".split()) == set()

    def test_duplicates_collapsed(self):
        rs = make_rules([
            {"id": "f1", "scope": "intent", "retag": "flight", "pattern": "flights"},
            {"id": "f2", "scope": "intent", "retag": "flight", "pattern": "from"},
        ])
        assert annotate_intent(rs, "flights from flights".split()) == {FLIGHT}


class TestAnnotateSlots:
    """Tests for slot annotation."""

    @pytest.fixture
    def city_rules(self):
        return make_rules(
            [
                {"id": "ft", "scope": "slot", "retag": "fromloc.city",
                 "pattern": r"from\s(__CITY)\sto\s(__CITY)",
                 "group_tags": [[1, "fromloc.city"], [2, "toloc.city"]]},
            ],
            {"__CITY": ["boston", "miami", "new york"]},
        )

    def test_group_tags(self, city_rules):
        tags = annotate_slots(city_rules, "flights from boston to miami".split())
        assert tags == ((), (), ("B-fromloc.city",), (), ("B-toloc.city",))

    def test_multi_token_group(self, city_rules):
        tags = annotate_slots(city_rules, "from new york to boston".split())
        assert tags[1] == ("B-fromloc.city",)
        assert tags[2] == ("I-fromloc.city",)
        assert tags[4] == ("B-toloc.city",)

    def test_partial_token_overlap_emits_nothing(self):
        rs = make_rules([{"id": "p", "scope": "slot", "retag": "city", "pattern": "(bos)",
                          "group_tags": [[1, "city"]]}])
        assert annotate_slots(rs, ["boston"]) == ((),)

    def test_tags_accumulate(self):
        rs = make_rules(
            [
                {"id": "from", "scope": "slot", "retag": "fromloc.city", "pattern": r"from\s(__CITY)",
                 "group_tags": [[1, "fromloc.city"]]},
                {"id": "city", "scope": "slot", "retag": "city", "pattern": r"(__CITY)",
                 "group_tags": [[1, "city"]]},
            ],
            {"__CITY": ["boston"]},
        )
        assert annotate_slots(rs, ["from", "boston"]) == ((), ("B-fromloc.city", "B-city"))

    def test_whole_match(self):
        rs = make_rules([{"id": "c", "scope": "slot", "retag": "cost_relative",
                          "pattern": "cheapest", "whole_match": True}])
        assert annotate_slots(rs, ["the", "cheapest", "fare"]) == ((), ("B-cost_relative",), ())

    def test_bio_well_formed(self, synth_rules, synthetic):
        """Every I-x tag should continue a B-x or I-x on the previous token."""
        for s in list(synthetic.train) + list(synthetic.test):
            tags = annotate_slots(synth_rules, list(s.tokens))
            for i, token_tags in enumerate(tags):
                for tag in token_tags:
                    if tag.startswith("I-"):
                        assert i > 0
                        assert {"B-" + tag[2:], tag} & set(tags[i - 1])


class TestClueMask:
    """Tests for attention targets."""

    def test_two_clue_tokens(self):
        rs = make_rules([{"id": "f", "scope": "intent", "retag": "flight",
                          "pattern": r"^(flights?\sfrom)", "clue_groups": [1]}])
        t = clue_mask(rs, "flights from boston to miami".split(), ["airfare", "flight"])
        np.testing.assert_allclose(t[1], [0.5, 0.5, 0, 0, 0])
        np.testing.assert_array_equal(t[0], np.zeros(5))

    def test_single_clue_token(self):
        rs = make_rules([{"id": "f", "scope": "intent", "retag": "flight",
                          "pattern": r"(flights)\sfrom", "clue_groups": [1]}])
        t = clue_mask(rs, "show flights from boston".split(), ["flight"])
        np.testing.assert_array_equal(t[0], [0.0, 1.0, 0.0, 0.0])

    def test_overlapping_clue_sets(self):
        """Clue tokens of several rules for one label should be unioned."""
        rs = make_rules([
            {"id": "r1", "scope": "intent", "retag": "k", "pattern": r"(w0\sw1)", "clue_groups": [1]},
            {"id": "r2", "scope": "intent", "retag": "k", "pattern": r"(w1\sw2)", "clue_groups": [1]},
        ])
        t = clue_mask(rs, ["w0", "w1", "w2", "w3"], ["k"])
        np.testing.assert_allclose(t[0], [1 / 3, 1 / 3, 1 / 3, 0.0])

    def test_rule_without_clues_gives_zero_row(self):
        rs = make_rules([{"id": "f", "scope": "intent", "retag": "flight", "pattern": "flights"}])
        t = clue_mask(rs, ["flights"], ["flight"])
        assert t.sum() == 0.0

    def test_negative_mask_from_derived_rules(self):
        rs = make_rules([
            {"id": "f", "scope": "intent", "retag": "flight", "pattern": r"(flights)", "clue_groups": [1]},
            {"id": "a", "scope": "intent", "retag": "airfare", "pattern": r"(fare)", "clue_groups": [1]},
        ])
        rs = derive_negatives(rs, ["airfare", "flight"])
        t_neg = clue_mask(rs, ["flights", "please"], ["airfare", "flight"], Polarity.NEGATIVE)
        np.testing.assert_array_equal(t_neg, [[1.0, 0.0], [0.0, 0.0]])

    def test_slot_mask(self):
        rs = make_rules(
            [{"id": "s", "scope": "slot", "retag": "toloc.city", "pattern": r"(to)\s(__CITY)",
              "group_tags": [[2, "toloc.city"]], "clue_groups": [1]}],
            {"__CITY": ["miami"]},
        )
        t = slot_clue_mask(rs, ["flights", "to", "miami"])
        np.testing.assert_array_equal(t, [[0, 0, 0], [0, 0, 0], [0, 1.0, 0]])

    def test_slot_negative_mask_points_at_competing_clues(self):
        """Each city's negative target should be the clue of the other slot's rule."""
        rs = make_rules(
            [{"id": "from", "scope": "slot", "retag": "fromloc.city", "pattern": r"(from)\s(__CITY)",
              "group_tags": [[2, "fromloc.city"]], "clue_groups": [1]},
             {"id": "to", "scope": "slot", "retag": "toloc.city", "pattern": r"(to)\s(__CITY)",
              "group_tags": [[2, "toloc.city"]], "clue_groups": [1]}],
            {"__CITY": ["boston", "miami"]},
        )
        rs = derive_negatives(rs, ["fromloc.city", "toloc.city"], Scope.SLOT)
        tokens = ["from", "boston", "to", "miami"]
        t_pos = slot_clue_mask(rs, tokens)
        t_neg = slot_clue_mask(rs, tokens, Polarity.NEGATIVE)
        np.testing.assert_array_equal(t_pos[1], [1.0, 0, 0, 0])
        np.testing.assert_array_equal(t_neg[1], [0, 0, 1.0, 0])
        np.testing.assert_array_equal(t_pos[3], [0, 0, 1.0, 0])
        np.testing.assert_array_equal(t_neg[3], [1.0, 0, 0, 0])
        assert t_neg[[0, 2]].sum() == 0.0

    def test_slot_negative_mask_empty_without_competition(self):
        rs = make_rules(
            [{"id": "to", "scope": "slot", "retag": "toloc.city", "pattern": r"(to)\s(__CITY)",
              "group_tags": [[2, "toloc.city"]], "clue_groups": [1]},
             {"id": "from", "scope": "slot", "retag": "fromloc.city", "pattern": r"(from)\s(__CITY)",
              "group_tags": [[2, "fromloc.city"]], "clue_groups": [1]}],
            {"__CITY": ["miami"]},
        )
        rs = derive_negatives(rs, ["fromloc.city", "toloc.city"], Scope.SLOT)
        assert slot_clue_mask(rs, ["flights", "to", "miami"], Polarity.NEGATIVE).sum() == 0.0

    def test_slot_negative_differs_on_synthetic_corpus(self, synth_rules, synthetic):
        rs = derive_negatives(synth_rules, list(synthetic.train.slot_types), Scope.SLOT)
        differ = 0
        for s in list(synthetic.train)[:200]:
            t_pos = slot_clue_mask(rs, list(s.tokens))
            t_neg = slot_clue_mask(rs, list(s.tokens), Polarity.NEGATIVE)
            if t_neg.any() and not np.array_equal(t_pos, t_neg):
                differ += 1
        assert differ > 0

    def test_rows_normalized(self, synth_rules, synthetic):
        labels = list(synthetic.train.intent_labels)
        for s in list(synthetic.train)[:100]:
            t = clue_mask(synth_rules, list(s.tokens), labels)
            for row in t:
                assert row.sum() == 0.0 or abs(row.sum() - 1.0) <= 1e-9
            ts = slot_clue_mask(synth_rules, list(s.tokens))
            for row in ts:
                assert row.sum() == 0.0 or abs(row.sum() - 1.0) <= 1e-9


class TestLabelIndicators:
    """Tests for z indicators."""

    def test_sentence_granularity(self):
        rs = make_rules([{"id": "f", "scope": "intent", "retag": "flight", "pattern": r"^flights?\sfrom"}])
        z = label_indicators(rs, "flights from boston to miami".split(), ["airfare", "flight"])
        np.testing.assert_array_equal(z, [0.0, 1.0])

    def test_token_granularity_expands_targets(self):
        rs = make_rules(
            [{"id": "c", "scope": "slot", "retag": "city", "pattern": r"(__CITY)",
              "group_tags": [[1, "city"]],
              "target_labels": ["fromloc.city", "toloc.city", "stoploc.city"]}],
            {"__CITY": ["boston"]},
        )
        labels = ["O", "B-fromloc.city", "B-toloc.city", "B-stoploc.city", "I-fromloc.city"]
        z = label_indicators(rs, ["to", "boston"], labels, Granularity.TOKEN)
        np.testing.assert_array_equal(z[0], np.zeros(5))
        np.testing.assert_array_equal(z[1], [0, 1, 1, 1, 0])

    def test_no_matches(self):
        rs = make_rules([{"id": "f", "scope": "intent", "retag": "flight", "pattern": "flights"}])
        assert label_indicators(rs, ["fares"], ["flight"]).sum() == 0.0

    def test_adding_rule_is_monotone(self, synthetic):
        base_rules = [{"id": "f", "scope": "intent", "retag": "flight", "pattern": r"flights?"}]
        extra = {"id": "a", "scope": "intent", "retag": "airfare", "pattern": r"fares?"}
        labels = list(synthetic.train.intent_labels)
        small, large = make_rules(base_rules), make_rules(base_rules + [extra])
        for s in list(synthetic.train)[:60]:
            z_small = label_indicators(small, list(s.tokens), labels)
            z_large = label_indicators(large, list(s.tokens), labels)
            assert (z_large >= z_small).all()


class TestDeriveNegatives:
    """Tests for negative rule derivation."""

    @staticmethod
    def _rules(n_labels, per_label):
        return make_rules([
            {"id": f"r{k}_{j}", "scope": "intent", "retag": f"l{k}", "pattern": f"w{k}x{j}"}
            for k in range(n_labels) for j in range(per_label)
        ])

    @staticmethod
    def _negatives_per_label(rs):
        counts = {}
        for rule in rs.by_scope(Scope.INTENT, Polarity.NEGATIVE):
            counts[rule.retag] = counts.get(rule.retag, 0) + 1
        return counts

    def test_two_labels(self):
        rs = derive_negatives(self._rules(2, 1), ["l0", "l1"])
        assert self._negatives_per_label(rs) == {"l0": 1, "l1": 1}

    def test_counts_at_scale(self):
        """18 labels with 3 rules each: every label gets 54 - 3 negatives."""
        labels = [f"l{k}" for k in range(18)]
        rs = derive_negatives(self._rules(18, 3), labels)
        counts = self._negatives_per_label(rs)
        assert set(counts) == set(labels)
        assert all(c == 51 for c in counts.values())
        assert len(rs.by_scope(Scope.INTENT, Polarity.POSITIVE)) == 54

    def test_single_label(self):
        rs = self._rules(1, 2)
        assert derive_negatives(rs, ["l0"]) is rs

    def test_derived_reuse_source_matches(self):
        rs = derive_negatives(self._rules(2, 1), ["l0", "l1"])
        neg = rs.get("r0_0!neg:l1")
        assert neg.source_id == "r0_0"
        assert neg.polarity is Polarity.NEGATIVE
        assert annotate_intent(rs, ["w0x0"]) == {("l0", Polarity.POSITIVE), ("l1", Polarity.NEGATIVE)}

    def test_slot_scope(self):
        rs = make_rules(
            [{"id": "s", "scope": "slot", "retag": "toloc.city", "pattern": r"to\s(__CITY)",
              "group_tags": [[1, "toloc.city"]]}],
            {"__CITY": ["boston"]},
        )
        rs = derive_negatives(rs, ["fromloc.city", "toloc.city"], Scope.SLOT)
        negatives = rs.by_scope(Scope.SLOT, Polarity.NEGATIVE)
        assert [r.retag for r in negatives] == ["fromloc.city"]
        assert negatives[0].group_tags == ((1, "fromloc.city"),)
        assert annotate_slots(rs, ["to", "boston"]) == ((), ("B-toloc.city",))


class TestRuleStats:
    """Tests for rule complexity measures."""

    def test_group_counts(self):
        rs = make_rules(
            [
                {"id": "long", "scope": "intent", "retag": "flight_time",
                 "pattern": r"how\slong(\s\w+){1,2}?\s(it\stake|flight)"},
                {"id": "city", "scope": "slot", "retag": "city", "pattern": r"(__CITY)",
                 "group_tags": [[1, "city"]]},
                {"id": "plain", "scope": "intent", "retag": "flight", "pattern": r"flights\sfrom"},
                {"id": "many", "scope": "intent", "retag": "flight", "pattern": r"(a)\s(b)\s(c|d|e)"},
            ],
            {"__CITY": ["boston", "miami"]},
        )
        stats = rule_stats(rs)
        per_rule = stats["rules"]
        assert per_rule["long"]["group_count"] == 2
        assert per_rule["long"]["or_clause_count"] == 1
        assert per_rule["city"]["group_count"] == 1
        assert per_rule["plain"]["group_count"] == 0
        assert per_rule["many"]["or_clause_count"] == 2
        assert per_rule["many"]["tier"] == "complex"
        assert per_rule["long"]["tier"] == "simple"
        assert stats["summary"]["total"] == 4
        assert stats["summary"]["complex"] == 1
        assert stats["summary"]["by_scope_polarity"] == {"intent/positive": 3, "slot/positive": 1}

    def test_macro_usage(self):
        rs = make_rules(
            [{"id": "c", "scope": "slot", "retag": "city", "pattern": r"(__CITY)\s(__CITY)",
              "group_tags": [[1, "city"]]},
             {"id": "p", "scope": "intent", "retag": "x", "pattern": "plain"}],
            {"__CITY": ["boston"], "__DAY": ["monday"]},
        )
        stats = rule_stats(rs)
        assert stats["rules"]["c"]["macros"] == ["__CITY", "__CITY"]
        assert stats["rules"]["p"]["macros"] == []
        assert stats["summary"]["unused_macros"] == ["__DAY"]

    def test_or_inside_class_not_counted(self):
        rs = make_rules([{"id": "c", "scope": "intent", "retag": "x", "pattern": r"[a|b]\|c"}])
        assert rule_stats(rs)["rules"]["c"]["or_clause_count"] == 0


class TestOracleEquivalence:
    """annotate_intent against a brute-force substring matcher."""

    PATTERNS = [
        r"(w1|w2)\sw3",
        r"w4(\sw\d+)?\sw5",
        r"(w6)",
        r"w7\s__GROUP",
        r"w8\s\w+\sw9",
        r"(w1[0-4])",
    ]

    def test_random_sentences(self):
        macros = {"__GROUP": ["w11", "w12 w13"]}
        rule_dicts = [
            {"id": f"p{i}", "scope": "intent", "retag": f"t{i % 3}", "pattern": p}
            for i, p in enumerate(self.PATTERNS)
        ]
        rs = make_rules(rule_dicts, macros)
        expanded = [
            (d["retag"], re.compile(expand_macros(d["pattern"], {k: tuple(v) for k, v in macros.items()}),
                                    re.IGNORECASE))
            for d in rule_dicts
        ]
        vocab = [f"w{i}" for i in range(20)]
        rng = np.random.default_rng(0)

        for _ in range(1000):
            n = int(rng.integers(1, 7))
            tokens = [vocab[int(i)] for i in rng.integers(0, 20, size=n)]
            text = " ".join(tokens)
            oracle = set()
            for retag, pattern in expanded:
                if any(pattern.fullmatch(text, i, j)
                       for i in range(len(text) + 1) for j in range(i, len(text) + 1)):
                    oracle.add((retag, Polarity.POSITIVE))
            assert annotate_intent(rs, tokens) == oracle, text

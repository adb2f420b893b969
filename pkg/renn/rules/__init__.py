"""
Rule Engine - regras de expressão regular anotadas

Compila arquivos de regras com macros de listas de palavras e avalia as
regras sobre sentenças tokenizadas (REtags, tags BIO, máscaras de pista
e indicadores por label).
"""
from .macros import MacroError, MacroTable, expand_macros, load_macros, validate_macros
from .compiler import (
    CompiledRuleSet,
    RuleError,
    compile_rules,
    compile_ruleset,
    derive_negatives,
    load_rules,
    rule_stats,
)
from .annotator import (
    Annotator,
    annotate,
    annotate_corpus,
    annotate_intent,
    annotate_slots,
    clue_mask,
    label_indicators,
    slot_clue_mask,
)

__all__ = [
    "MacroError",
    "MacroTable",
    "expand_macros",
    "load_macros",
    "validate_macros",
    "CompiledRuleSet",
    "RuleError",
    "compile_rules",
    "compile_ruleset",
    "derive_negatives",
    "load_rules",
    "rule_stats",
    "Annotator",
    "annotate",
    "annotate_corpus",
    "annotate_intent",
    "annotate_slots",
    "clue_mask",
    "label_indicators",
    "slot_clue_mask",
]

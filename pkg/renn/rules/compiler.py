"""
Compilador de Regras

Carrega arquivos de regras (uma regra JSON por linha), expande macros,
compila os patterns e valida os índices de grupo referenciados.

Fluxo:
    load_rules(rule_file) + load_macros(macro_file)
        -> compile_rules() -> CompiledRuleSet
        -> derive_negatives() (opcional)
"""
import json
import logging
import re
from dataclasses import dataclass, field, replace
from pathlib import Path
from statistics import mean
from typing import Optional

from ..types import RuleSpec, Scope, Polarity
from .macros import MacroTable, MacroError, expand_macros, load_macros, referenced_macros

logger = logging.getLogger(__name__)

RULE_KEYS = {
    "id", "scope", "pattern", "retag", "polarity", "group_tags",
    "clue_groups", "target_labels", "whole_match",
}

SIMPLE_MAX_GROUPS = 2   # regras com até 2 grupos são "simple"; 3+ são "complex"


class RuleError(ValueError):
    """Regra inválida (arquivo, pattern ou índice de grupo)."""

    def __init__(self, message: str, rule_id: Optional[str] = None, line: Optional[int] = None):
        self.rule_id = rule_id
        self.line = line
        prefix = ""
        if line is not None:
            prefix += f"line {line}: "
        if rule_id is not None:
            prefix += f"rule {rule_id}: "
        super().__init__(prefix + message)


@dataclass(frozen=True)
class CompiledRuleSet:
    """Conjunto imutável de regras compiladas."""
    rules: tuple[RuleSpec, ...] = ()
    macros: MacroTable = field(default_factory=dict)
    matchers: dict[str, re.Pattern] = field(default_factory=dict)
    group_counts: dict[str, int] = field(default_factory=dict)

    def __len__(self) -> int:
        return len(self.rules)

    def by_scope(self, scope: Scope, polarity: Optional[Polarity] = None) -> list[RuleSpec]:
        """Regras de um escopo (e polaridade, se informada) na ordem do arquivo."""
        return [
            r for r in self.rules
            if r.scope is scope and (polarity is None or r.polarity is polarity)
        ]

    def get(self, rule_id: str) -> RuleSpec:
        for rule in self.rules:
            if rule.id == rule_id:
                return rule
        raise KeyError(rule_id)

    def intent_retags(self) -> list[str]:
        return sorted({r.retag for r in self.by_scope(Scope.INTENT)})

    def slot_retags(self) -> list[str]:
        """Tags de slot (sem prefixo BIO) emitidas pelas regras positivas."""
        tags = set()
        for rule in self.by_scope(Scope.SLOT, Polarity.POSITIVE):
            if rule.whole_match:
                tags.add(rule.retag)
            tags.update(tag for _, tag in rule.group_tags)
        return sorted(tags)


# --- Validação de pattern ---

def _scan_unsupported(pattern: str) -> Optional[tuple[str, int]]:
    """
    Procura construções fora do dialeto suportado.

    Returns:
        (descrição, posição) ou None
    """
    i = 0
    in_class = False
    while i < len(pattern):
        ch = pattern[i]
        if ch == "\\":
            nxt = pattern[i + 1:i + 2]
            if not in_class and nxt.isdigit() and nxt != "0":
                return "backreference", i
            if nxt == "k":
                return "backreference", i
            i += 2
            continue
        if in_class:
            if ch == "]":
                in_class = False
        elif ch == "[":
            in_class = True
            # ']' logo após '[' ou '[^' é literal
            if pattern[i + 1:i + 2] == "^":
                i += 1
            if pattern[i + 1:i + 2] == "]":
                i += 1
        elif pattern.startswith("(?=", i) or pattern.startswith("(?!", i):
            return "lookahead", i
        elif pattern.startswith("(?<=", i) or pattern.startswith("(?<!", i):
            return "lookbehind", i
        elif pattern.startswith("(?P=", i):
            return "backreference", i
        i += 1
    return None


def count_or_clauses(pattern: str) -> int:
    """Número de '|' não escapados fora de classes de caracteres."""
    count = 0
    i = 0
    in_class = False
    while i < len(pattern):
        ch = pattern[i]
        if ch == "\\":
            i += 2
            continue
        if in_class:
            if ch == "]":
                in_class = False
        elif ch == "[":
            in_class = True
            if pattern[i + 1:i + 2] == "^":
                i += 1
            if pattern[i + 1:i + 2] == "]":
                i += 1
        elif ch == "|":
            count += 1
        i += 1
    return count


# --- Carregamento ---

def _parse_rule(obj: dict, line: int) -> RuleSpec:
    if not isinstance(obj, dict):
        raise RuleError("expected a JSON object", line=line)
    rule_id = obj.get("id")
    if not isinstance(rule_id, str) or not rule_id:
        raise RuleError("missing or empty 'id'", line=line)
    unknown = set(obj) - RULE_KEYS
    if unknown:
        raise RuleError(f"unknown keys {sorted(unknown)}", rule_id, line)

    try:
        scope = Scope(obj.get("scope"))
        polarity = Polarity(obj.get("polarity", "positive"))
    except ValueError as e:
        raise RuleError(str(e), rule_id, line) from e

    pattern = obj.get("pattern")
    if not isinstance(pattern, str) or not pattern:
        raise RuleError("missing or empty 'pattern'", rule_id, line)
    retag = obj.get("retag")
    if not isinstance(retag, str) or not retag:
        raise RuleError("retag must be a non-empty string", rule_id, line)

    group_tags = []
    for item in obj.get("group_tags", []):
        if (not isinstance(item, list) or len(item) != 2
                or not isinstance(item[0], int) or not isinstance(item[1], str) or not item[1]):
            raise RuleError(f"group_tags entry {item!r} must be [index, tag]", rule_id, line)
        if item[0] < 1:
            raise RuleError(f"group index {item[0]} must be >= 1", rule_id, line)
        group_tags.append((item[0], item[1]))

    clue_groups = obj.get("clue_groups", [])
    if not all(isinstance(g, int) and g >= 1 for g in clue_groups):
        raise RuleError("clue_groups must be positive group indices", rule_id, line)
    target_labels = obj.get("target_labels", [])
    if not all(isinstance(t, str) and t for t in target_labels):
        raise RuleError("target_labels must be non-empty strings", rule_id, line)
    whole_match = obj.get("whole_match", False)
    if not isinstance(whole_match, bool):
        raise RuleError("whole_match must be a boolean", rule_id, line)

    if scope is Scope.SLOT and not group_tags and not whole_match:
        raise RuleError(
            "slot rule without group_tags must set whole_match", rule_id, line
        )

    return RuleSpec(
        id=rule_id,
        scope=scope,
        pattern=pattern,
        retag=retag,
        polarity=polarity,
        group_tags=tuple(group_tags),
        clue_groups=tuple(clue_groups),
        target_labels=tuple(target_labels),
        whole_match=whole_match,
    )


def load_rules(path: str | Path) -> list[RuleSpec]:
    """
    Carrega um arquivo de regras (JSON lines).

    Linhas em branco são ignoradas. IDs duplicados são rejeitados.
    """
    path = Path(path)
    if not path.exists():
        raise FileNotFoundError(f"rule file not found: {path}")

    rules: list[RuleSpec] = []
    seen: set[str] = set()
    with open(path, encoding="utf-8") as f:
        for lineno, raw in enumerate(f, start=1):
            raw = raw.strip()
            if not raw:
                continue
            try:
                obj = json.loads(raw)
            except json.JSONDecodeError as e:
                raise RuleError(f"invalid JSON: {e.msg}", line=lineno) from e
            rule = _parse_rule(obj, lineno)
            if rule.id in seen:
                raise RuleError("duplicate rule id", rule.id, lineno)
            seen.add(rule.id)
            rules.append(rule)

    logger.debug(f"Loaded {len(rules)} rules from {path}")
    return rules


# --- Compilação ---

def compile_pattern(rule: RuleSpec, macros: MacroTable) -> re.Pattern:
    """Expande macros e compila o pattern de uma regra (case-insensitive)."""
    unsupported = _scan_unsupported(rule.pattern)
    if unsupported:
        what, pos = unsupported
        raise RuleError(f"{what} is not supported (position {pos})", rule.id)
    try:
        expanded = expand_macros(rule.pattern, macros)
    except MacroError as e:
        raise RuleError(str(e), rule.id) from e
    try:
        return re.compile(expanded, re.IGNORECASE)
    except re.error as e:
        raise RuleError(f"invalid pattern at position {e.pos}: {e.msg}", rule.id) from e


def compile_rules(rules: list[RuleSpec], macros: Optional[MacroTable] = None) -> CompiledRuleSet:
    """
    Compila regras em memória.

    Args:
        rules: Regras carregadas (ou construídas programaticamente)
        macros: Tabela de macros

    Returns:
        CompiledRuleSet com um matcher e group_count por regra
    """
    macros = macros or {}
    matchers: dict[str, re.Pattern] = {}
    group_counts: dict[str, int] = {}

    for rule in rules:
        if rule.match_key in matchers:
            compiled = matchers[rule.match_key]
        else:
            compiled = compile_pattern(rule, macros)
        referenced = [g for g, _ in rule.group_tags] + list(rule.clue_groups)
        for g in referenced:
            if g > compiled.groups:
                raise RuleError(
                    f"group {g} referenced but pattern has {compiled.groups} groups", rule.id
                )
        matchers[rule.id] = compiled
        group_counts[rule.id] = compiled.groups

    return CompiledRuleSet(
        rules=tuple(rules),
        macros=dict(macros),
        matchers=matchers,
        group_counts=group_counts,
    )


def compile_ruleset(rule_file: str | Path, macro_file: Optional[str | Path] = None) -> CompiledRuleSet:
    """
    Carrega e compila um arquivo de regras com seus macros.

    Args:
        rule_file: Arquivo JSON lines de regras
        macro_file: Arquivo JSON de macros (opcional)

    Returns:
        CompiledRuleSet
    """
    macros = load_macros(macro_file) if macro_file else {}
    rs = compile_rules(load_rules(rule_file), macros)
    logger.info(f"Compiled {len(rs)} rules ({len(macros)} macros) from {rule_file}")
    return rs


def derive_negatives(
    rs: CompiledRuleSet,
    label_set: list[str],
    scope: Scope = Scope.INTENT,
) -> CompiledRuleSet:
    """
    Registra cada regra positiva do label j como negativa para todo label k != j.

    A regra derivada reaproveita o matcher da regra de origem; muda o
    retag (k) e a polaridade. Em regras de slot os grupos marcados passam
    a carregar k, o label contra o qual a regra depõe.

    Args:
        rs: Regras compiladas (positivas)
        label_set: Labels alvo (intents, ou tipos de slot)
        scope: Escopo das regras a derivar

    Returns:
        Novo CompiledRuleSet com as negativas acrescentadas
    """
    derived: list[RuleSpec] = []
    existing = {r.id for r in rs.rules}
    for rule in rs.by_scope(scope, Polarity.POSITIVE):
        if rule.source_id is not None:
            continue
        if scope is Scope.INTENT:
            own = set(rule.targets_for(rule.retag))
        else:
            own = set()
            for _, tag in rule.group_tags:
                own.update(rule.targets_for(tag))
            if rule.whole_match:
                own.update(rule.targets_for(rule.retag))
        for label in label_set:
            if label in own:
                continue
            neg_id = f"{rule.id}!neg:{label}"
            if neg_id in existing:
                continue
            derived.append(replace(
                rule,
                id=neg_id,
                retag=label,
                group_tags=tuple((g, label) for g, _ in rule.group_tags),
                polarity=Polarity.NEGATIVE,
                target_labels=(),
                source_id=rule.id,
            ))

    if not derived:
        return rs
    logger.info(f"Derived {len(derived)} negative {scope.value} rules for {len(label_set)} labels")
    return compile_rules(list(rs.rules) + derived, rs.macros)


def rule_stats(rs: CompiledRuleSet) -> dict:
    """
    Medidas de complexidade por regra e um resumo do conjunto.

    Returns:
        {"rules": {id: {group_count, or_clause_count, tier, macros}}, "summary": {...}}
    """
    per_rule = {}
    for rule in rs.rules:
        groups = rs.group_counts[rule.id]
        per_rule[rule.id] = {
            "group_count": groups,
            "or_clause_count": count_or_clauses(rule.pattern),
            "tier": "simple" if groups <= SIMPLE_MAX_GROUPS else "complex",
            "macros": referenced_macros(rule.pattern),
        }

    used = {name for s in per_rule.values() for name in s["macros"]}
    counts: dict[str, int] = {}
    for rule in rs.rules:
        key = f"{rule.scope.value}/{rule.polarity.value}"
        counts[key] = counts.get(key, 0) + 1

    summary = {
        "total": len(rs.rules),
        "by_scope_polarity": counts,
        "mean_group_count": mean(s["group_count"] for s in per_rule.values()) if per_rule else 0.0,
        "complex": sum(1 for s in per_rule.values() if s["tier"] == "complex"),
        "unused_macros": sorted(set(rs.macros) - used),
    }
    return {"rules": per_rule, "summary": summary}

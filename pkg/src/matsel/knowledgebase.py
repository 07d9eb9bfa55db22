"""Rule knowledgebase and the index-based requirement classifier.

A rule is a conjunction of threshold conditions over scalarized property
values, targeting one material class. Classification evaluates every
rule whose conditions only mention properties present in the
requirement; the class with the most satisfied rules wins, ties broken
by the canonical class order (Polymer < Ceramic < Metal). The sorted
ids of the satisfied rules form the classification's index pattern.

Rules file grammar (one rule per line, ``#`` starts a comment)::

    rule <id> => <Polymer|Ceramic|Metal> when <cond> [and <cond>]...
    <cond>  ::= <property> <cmp> <number> | <property> between <lo> <hi>
    <cmp>   ::= <  |  <=  |  >  |  >=

The bundled default knowledgebase ``rules23`` ships 23 rules covering
all three classes.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from importlib import resources

from .errors import RulesLoadError, UnclassifiableError
from .schema import DesignRequirement, MaterialClass, PropertySchema

_COMPARATORS = ("<=", ">=", "<", ">", "between")


@dataclass(frozen=True)
class Condition:
    """One threshold predicate over a scalarized property value."""

    property_name: str
    comparator: str  # one of _COMPARATORS
    threshold: float | tuple[float, float]

    def evaluate(self, value: float) -> bool:
        if self.comparator == "<":
            return value < self.threshold
        if self.comparator == "<=":
            return value <= self.threshold
        if self.comparator == ">":
            return value > self.threshold
        if self.comparator == ">=":
            return value >= self.threshold
        lo, hi = self.threshold  # type: ignore[misc]
        return lo <= value <= hi

    def __str__(self) -> str:
        if self.comparator == "between":
            lo, hi = self.threshold  # type: ignore[misc]
            return f"{self.property_name} between {lo:g} {hi:g}"
        return f"{self.property_name} {self.comparator} {self.threshold:g}"


@dataclass(frozen=True)
class DecisionRule:
    rule_id: int
    target: MaterialClass
    conditions: tuple[Condition, ...]

    @property
    def property_names(self) -> frozenset[str]:
        return frozenset(c.property_name for c in self.conditions)

    def __str__(self) -> str:
        conds = " and ".join(str(c) for c in self.conditions)
        return f"rule {self.rule_id} => {self.target.value} when {conds}"


@dataclass(frozen=True)
class Knowledgebase:
    rules: tuple[DecisionRule, ...]

    def __len__(self) -> int:
        return len(self.rules)

    def rules_for(self, material_class: MaterialClass) -> tuple[DecisionRule, ...]:
        return tuple(r for r in self.rules if r.target is material_class)


@dataclass(frozen=True)
class ClassificationResult:
    """Outcome of classifying one requirement.

    ``index_pattern`` is the ascending, duplicate-free list of fired
    rule ids; ``node_list`` pairs each requirement property with its
    schema position, in requirement entry order.
    """

    material_class: MaterialClass
    index_pattern: tuple[int, ...]
    node_list: tuple[tuple[str, int], ...]
    class_scores: dict[MaterialClass, int]


_RULE_RE = re.compile(r"^rule\s+(\d+)\s*=>\s*(\w+)\s+when\s+(.+)$")


def parse_rules(text: str, schema: PropertySchema) -> Knowledgebase:
    """Parse and validate a rules file against a schema."""
    rules: list[DecisionRule] = []
    seen_ids: set[int] = set()
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        match = _RULE_RE.match(line)
        if match is None:
            raise RulesLoadError(
                f"expected 'rule <id> => <class> when <conditions>', got {raw.strip()!r}",
                line=lineno,
            )
        rule_id = int(match.group(1))
        if rule_id in seen_ids:
            raise RulesLoadError(f"duplicate rule id {rule_id}", line=lineno)
        seen_ids.add(rule_id)
        try:
            target = MaterialClass(match.group(2))
        except ValueError:
            raise RulesLoadError(f"unknown material class {match.group(2)!r}", line=lineno) from None
        conditions = tuple(
            _parse_condition(part.strip(), schema, lineno)
            for part in match.group(3).split(" and ")
        )
        rules.append(DecisionRule(rule_id, target, conditions))
    if not rules:
        raise RulesLoadError("rules file defines no rules")
    for material_class in MaterialClass:
        if not any(r.target is material_class for r in rules):
            raise RulesLoadError(f"class {material_class.value} has zero rules")
    return Knowledgebase(tuple(rules))


def _parse_condition(text: str, schema: PropertySchema, lineno: int) -> Condition:
    # The property name is everything before the comparator token, so
    # names with spaces parse without quoting.
    tokens = text.split()
    cmp_index = next((i for i, t in enumerate(tokens) if t in _COMPARATORS), None)
    if cmp_index is None or cmp_index == 0:
        raise RulesLoadError(f"malformed condition {text!r} (no comparator)", line=lineno)
    name = " ".join(tokens[:cmp_index])
    if name not in schema:
        raise RulesLoadError(f"unknown property {name!r}", line=lineno)
    comparator = tokens[cmp_index]
    args = tokens[cmp_index + 1 :]
    try:
        if comparator == "between":
            if len(args) != 2:
                raise RulesLoadError(
                    f"'between' needs two bounds in {text!r}", line=lineno
                )
            lo, hi = float(args[0]), float(args[1])
            if lo > hi:
                raise RulesLoadError(f"'between' bounds out of order in {text!r}", line=lineno)
            return Condition(name, comparator, (lo, hi))
        if len(args) != 1:
            raise RulesLoadError(f"malformed condition {text!r}", line=lineno)
        return Condition(name, comparator, float(args[0]))
    except ValueError:
        raise RulesLoadError(f"unparsable threshold in {text!r}", line=lineno) from None


def load_rules(path, schema: PropertySchema) -> Knowledgebase:
    with open(path, "r", encoding="utf-8") as fh:
        return parse_rules(fh.read(), schema)


def default_rules(schema: PropertySchema | None = None) -> Knowledgebase:
    """The bundled 23-rule knowledgebase (``data/rules23``)."""
    from .schema import default_schema

    text = resources.files("matsel").joinpath("data/rules23").read_text(encoding="utf-8")
    return parse_rules(text, schema if schema is not None else default_schema())


def classify(
    req: DesignRequirement, kb: Knowledgebase, schema: PropertySchema
) -> ClassificationResult:
    """Classify a requirement into a material class.

    Rules mentioning properties absent from the requirement are skipped
    (requirements are partial by design); among the evaluated rules, the
    class collecting the most satisfied rules wins.

    Raises :class:`UnclassifiableError` when no rule fires, listing the
    evaluated rules that came closest.
    """
    req.validate(schema)
    values = dict(zip(req.names, req.scalarized(schema)))

    fired: list[int] = []
    scores: dict[MaterialClass, int] = {c: 0 for c in MaterialClass}
    near_misses: list[tuple[int, int, int]] = []
    for rule in kb.rules:
        if not rule.property_names <= values.keys():
            continue  # rule mentions a property the engineer did not constrain
        satisfied = sum(1 for c in rule.conditions if c.evaluate(values[c.property_name]))
        if satisfied == len(rule.conditions):
            fired.append(rule.rule_id)
            scores[rule.target] += 1
        else:
            near_misses.append((rule.rule_id, satisfied, len(rule.conditions)))

    if not fired:
        near_misses.sort(key=lambda m: (m[1] / m[2], -m[0]), reverse=True)
        raise UnclassifiableError(
            "no decision rule fired for the requirement", near_misses[:3]
        )

    best = max(scores.values())
    winner = next(c for c in MaterialClass if scores[c] == best)  # canonical-order tie-break
    node_list = tuple((name, schema.position(name)) for name in req.names)
    return ClassificationResult(winner, tuple(sorted(fired)), node_list, scores)

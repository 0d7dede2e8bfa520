"""Association-rule mining over dissolved risk factors.

Each binary risk feature dissolves into a yes-factor and a no-factor; a
record becomes a transaction holding one factor per mapped feature plus the
victim item when its label is 1. Apriori enumerates the frequent itemsets
level-wise, and rules are read off the lattice for a fixed consequent
(normally the victim item), so a rule's confidence is exactly
P(consequent | antecedent) over the transaction list.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from importlib import resources
from itertools import combinations

from .dataset import Dataset
from .errors import ConfigError, UnmappedFeatureError, ZeroAntecedentSupportError


@dataclass(frozen=True)
class FactorEntry:
    factor_id: int
    feature: str
    value: int
    description: str


@dataclass(frozen=True)
class FactorMap:
    entries: tuple[FactorEntry, ...]
    victim_item: int = 39

    def __post_init__(self):
        ids = [e.factor_id for e in self.entries]
        if len(set(ids)) != len(ids):
            raise ConfigError("factor ids must be unique")
        if self.victim_item in ids:
            raise ConfigError("victim item id collides with a factor id")
        per_feature: dict[str, set[int]] = {}
        for e in self.entries:
            per_feature.setdefault(e.feature, set()).add(e.value)
        for feature, values in per_feature.items():
            if values != {0, 1}:
                raise ConfigError(f"mapped feature {feature!r} must dissolve into exactly the 0 and 1 factors")

    @property
    def features(self) -> tuple[str, ...]:
        seen: list[str] = []
        for e in self.entries:
            if e.feature not in seen:
                seen.append(e.feature)
        return tuple(seen)

    def factor_for(self, feature: str, value: int) -> int:
        for e in self.entries:
            if e.feature == feature and e.value == value:
                return e.factor_id
        raise UnmappedFeatureError(feature)

    def describe(self, factor_id: int) -> str:
        if factor_id == self.victim_item:
            return "victim"
        for e in self.entries:
            if e.factor_id == factor_id:
                return e.description
        raise KeyError(factor_id)

    def restrict(self, features) -> "FactorMap":
        """Keep only the entries of *features*, preserving the original ids."""
        wanted = set(features)
        return FactorMap(
            entries=tuple(e for e in self.entries if e.feature in wanted),
            victim_item=self.victim_item,
        )


def default_factor_map() -> FactorMap:
    """The shipped catalog: 19 risk features dissolved into factors 1..38."""
    doc = json.loads(resources.files("riskminer.resources").joinpath("factors.json").read_text("utf-8"))
    return FactorMap(
        entries=tuple(
            FactorEntry(e["id"], e["feature"], e["value"], e["description"]) for e in doc["factors"]
        ),
        victim_item=doc["victim_item"],
    )


def dissolve(record: dict, label: int, fm: FactorMap) -> frozenset:
    """Transaction for one record: one factor per mapped feature, plus the
    victim item when label == 1. *record* maps feature name to code."""
    items = set()
    for feature in fm.features:
        if feature not in record:
            raise UnmappedFeatureError(feature)
        items.add(fm.factor_for(feature, record[feature]))
    if label == 1:
        items.add(fm.victim_item)
    return frozenset(items)


def dissolve_dataset(ds: Dataset, fm: FactorMap) -> list[frozenset]:
    idx = {feature: ds.schema.index_of(feature) for feature in fm.features}
    out = []
    for rec, lab in zip(ds.records, ds.labels):
        row = {feature: rec[j] for feature, j in idx.items()}
        out.append(dissolve(row, lab, fm))
    return out


def apriori(transactions, min_support: float) -> dict[frozenset, float]:
    """All itemsets with support >= min_support, found level-wise.

    Support is the fraction of transactions containing the itemset. Candidate
    (k)-itemsets join frequent (k-1)-itemsets sharing a (k-2)-prefix and are
    pruned unless every (k-1)-subset is frequent.
    """
    if not transactions:
        raise ConfigError("no transactions to mine")
    if not 0.0 < min_support <= 1.0:
        raise ConfigError("min_support must lie in (0, 1]")
    n = len(transactions)
    counts: dict[frozenset, int] = {}
    for t in transactions:
        for item in t:
            key = frozenset((item,))
            counts[key] = counts.get(key, 0) + 1
    frequent = {s: c / n for s, c in counts.items() if c / n >= min_support}
    result = dict(frequent)
    current = sorted(tuple(sorted(s)) for s in frequent)
    k = 2
    while current:
        survivors = set(map(frozenset, current))
        candidates = []
        for a, b in combinations(sorted(current), 2):
            if a[: k - 2] != b[: k - 2]:
                continue
            joined = tuple(sorted(set(a) | set(b)))
            if len(joined) != k:
                continue
            if all(frozenset(sub) in survivors for sub in combinations(joined, k - 1)):
                candidates.append(joined)
        if not candidates:
            break
        tally = {c: 0 for c in candidates}
        cand_sets = {c: frozenset(c) for c in candidates}
        for t in transactions:
            for c in candidates:
                if cand_sets[c] <= t:
                    tally[c] += 1
        current = []
        for c, hit in tally.items():
            support = hit / n
            if support >= min_support:
                result[cand_sets[c]] = support
                current.append(c)
        k += 1
    return result


@dataclass(frozen=True)
class Rule:
    antecedent: frozenset
    consequent: frozenset
    support: float
    confidence: float
    lift: float


def derive_rules(
    itemsets: dict[frozenset, float],
    min_confidence: float,
    consequent: frozenset,
    cap: int = 10_000,
) -> list[Rule]:
    """Rules (S \\ consequent -> consequent) for every frequent S containing
    the consequent, filtered by confidence, sorted by confidence then support
    descending then antecedent, and truncated to *cap*."""
    consequent = frozenset(consequent)
    if consequent not in itemsets:
        return []
    cons_support = itemsets[consequent]
    rules = []
    for s, support in itemsets.items():
        if s == consequent or not consequent <= s:
            continue
        antecedent = s - consequent
        conf = support / itemsets[antecedent]
        if conf >= min_confidence:
            rules.append(
                Rule(
                    antecedent=antecedent,
                    consequent=consequent,
                    support=support,
                    confidence=conf,
                    lift=conf / cons_support,
                )
            )
    rules.sort(key=lambda r: (-r.confidence, -r.support, tuple(sorted(r.antecedent))))
    return rules[:cap]


def rule_metrics(rule: Rule, transactions) -> tuple[float, float, float]:
    """Recompute (support, confidence, lift) directly from the transactions;
    serves as the cross-check against lattice-derived values."""
    n = len(transactions)
    union = rule.antecedent | rule.consequent
    n_union = sum(1 for t in transactions if union <= t)
    n_ante = sum(1 for t in transactions if rule.antecedent <= t)
    n_cons = sum(1 for t in transactions if rule.consequent <= t)
    if n_ante == 0:
        raise ZeroAntecedentSupportError()
    support = n_union / n
    confidence = support / (n_ante / n)
    lift = confidence / (n_cons / n)
    return support, confidence, lift

"""Brute-force scoring oracle and a random small-graph generator.

The oracle re-derives every quantity with naive nested loops over the raw
fact lists: no frequency table, no blocking index, no neighborhood caching.
It shares nothing with the engine besides the data classes.
"""
from __future__ import annotations

import random
from typing import Dict, List, Optional, Tuple

from heatalign.engine import PriorSpec, StageConfig
from heatalign.graph import EntityNode, EventHub, FactGraph, FactTriple, load_validate
from heatalign.matchers import (
    HASHED_NAME_KEY,
    AttributeExtractorSpec,
    ConstraintSpec,
    IndicatorSpec,
)


def naive_normalize(value: str, normalization: str) -> str:
    if normalization == "case_fold":
        return value.casefold()
    if normalization == "case_fold_trim":
        return value.strip().casefold()
    return value


def naive_extract(node: EntityNode, spec: AttributeExtractorSpec) -> List[str]:
    out = []
    for key in spec.keys:
        for value in node.attributes.get(key, []):
            out.append(naive_normalize(value, spec.normalization))
    return out


def naive_levenshtein(a: str, b: str) -> int:
    rows = [list(range(len(b) + 1))]
    for i in range(1, len(a) + 1):
        row = [i]
        for j in range(1, len(b) + 1):
            cost = 0 if a[i - 1] == b[j - 1] else 1
            row.append(min(rows[i - 1][j] + 1, row[j - 1] + 1, rows[i - 1][j - 1] + cost))
        rows.append(row)
    return rows[len(a)][len(b)]


def naive_passes(
    query_values: List[str], cand_values: List[str], constraint: ConstraintSpec
) -> bool:
    if constraint.variant == "type_only":
        return True
    for q in query_values:
        for c in cand_values:
            if constraint.variant in ("exact_key", "hashed_name"):
                if q == c:
                    return True
            else:  # levenshtein
                if not q and not c:
                    dist = 0.0
                else:
                    dist = naive_levenshtein(q, c) / max(len(q), len(c))
                if dist <= constraint.max_normalized_distance:
                    return True
    return False


def naive_constraint_values(node: EntityNode, stage: StageConfig) -> List[str]:
    key = stage.constraint.value_key
    values = list(node.attributes.get(key, []))
    if stage.constraint.variant == "hashed_name":
        return values
    return [naive_normalize(v, stage.extractor.normalization) for v in values]


def naive_blanket(g: FactGraph, node_id: str) -> List[str]:
    events = {f.event for f in g.facts if f.entity == node_id}
    members = set()
    for f in g.facts:
        if f.event in events and f.entity != node_id:
            members.add(f.entity)
    return sorted(members)


def naive_neighbor_facts(g: FactGraph, node_id: str) -> List[FactTriple]:
    events = {f.event for f in g.facts if f.entity == node_id}
    facts = [f for f in g.facts if f.event in events and f.entity != node_id]
    return sorted(facts, key=lambda f: (f.event, f.predicate, f.entity))


def naive_value_frequency(g_prime: FactGraph, value: str,
                          spec: AttributeExtractorSpec) -> int:
    # multiset semantics: a repeated value on one node counts once per occurrence
    count = 0
    for fact in g_prime.facts:
        count += naive_extract(g_prime.entities[fact.entity], spec).count(value)
    return count


def naive_count(
    g: FactGraph, g_prime: FactGraph, n_i: str, n_k: str, stage: StageConfig
) -> Tuple[float, float]:
    """(c_k, iota_k) by direct transcription of the weighted count formula."""
    spec = stage.extractor
    neighbor = naive_neighbor_facts(g_prime, n_k)
    neighbor_values = [
        naive_extract(g_prime.entities[f.entity], spec) for f in neighbor
    ]
    events_k = {f.event for f in g_prime.facts if f.entity == n_k}

    if stage.indicators.node_types:
        ind_values = []
        for j in naive_blanket(g, n_i):
            if g.entities[j].node_type in stage.indicators.node_types:
                ind_values.extend(naive_extract(g.entities[j], spec))
        if not events_k or not ind_values:
            iota = 0.0
        else:
            best = 0
            for a in set(ind_values):
                hits = sum(values.count(a) for values in neighbor_values)
                best = max(best, hits)
            iota = min(1.0, best / len(events_k))
    else:
        iota = 1.0

    total = 0.0
    for j in naive_blanket(g, n_i):
        node_j = g.entities[j]
        if node_j.node_type in stage.indicators.node_types:
            continue
        for value in naive_extract(node_j, spec):
            hits = sum(values.count(value) for values in neighbor_values)
            if hits:
                total += hits / naive_value_frequency(g_prime, value, spec)
    return iota * total, iota


def naive_eat(
    g: FactGraph, g_prime: FactGraph, stage: StageConfig
) -> Dict[str, Optional[List[Tuple[str, float]]]]:
    """node id -> [(candidate or NEW, probability)] or None for unalignable rows."""
    same = g is g_prime
    rows: Dict[str, Optional[List[Tuple[str, float]]]] = {}
    for n_i in sorted(g.entities):
        node = g.entities[n_i]
        if node.node_type != stage.ambiguous_node_type:
            continue
        query_values = naive_constraint_values(node, stage)
        candidates = []
        for n_k in sorted(g_prime.entities):
            cand = g_prime.entities[n_k]
            if cand.node_type != stage.constraint.candidate_node_type:
                continue
            if same and n_k == n_i:
                continue
            if naive_passes(query_values, naive_constraint_values(cand, stage),
                            stage.constraint):
                candidates.append(n_k)
        labels = list(candidates)
        counts = [naive_count(g, g_prime, n_i, n_k, stage)[0] for n_k in candidates]
        alphas = [stage.prior.alpha_for(n_i, n_k) for n_k in candidates]
        if stage.prior.new_node_alpha > 0:
            labels.append("NEW")
            counts.append(0.0)
            alphas.append(stage.prior.new_node_alpha)
        denom = sum(c + a for c, a in zip(counts, alphas))
        if not labels or denom <= 0.0:
            rows[n_i] = None
            continue
        rows[n_i] = [
            (label, (c + a) / denom) for label, c, a in zip(labels, counts, alphas)
        ]
    return rows


# -- random small cases ----------------------------------------------------

_VOCAB = ["alpha", "beta", "gamma", "delta", "epsilon", "zeta", "Alpha", "bet"]
_HASHES = ["j.smith", "a.jones", "m.lee"]
_TYPES = ["person", "organization", "text"]


def random_graph(rng: random.Random, max_entities: int = 20,
                 max_events: int = 10) -> FactGraph:
    n_entities = rng.randint(1, max_entities)
    entities = []
    for i in range(n_entities):
        node_type = rng.choice(_TYPES)
        attrs = {}
        if rng.random() < 0.9:
            attrs["v"] = [rng.choice(_VOCAB) for _ in range(rng.randint(1, 2))]
        if node_type == "person" and rng.random() < 0.9:
            attrs[HASHED_NAME_KEY] = [rng.choice(_HASHES)]
        entities.append(EntityNode(f"n{i}", node_type, attrs))
    events = []
    facts = []
    for e in range(rng.randint(0, max_events)):
        members = rng.sample(entities, k=min(len(entities), rng.randint(1, 4)))
        if not members:
            continue
        events.append(EventHub(f"e{e}", {}))
        for member in members:
            facts.append(FactTriple(f"e{e}", rng.choice(["a", "b"]), member.id))
            if rng.random() < 0.2:  # occasional second predicate to the same node
                facts.append(FactTriple(f"e{e}", "c", member.id))
    return load_validate(entities, events, facts)


def random_stage(rng: random.Random) -> StageConfig:
    variant = rng.choice(["type_only", "exact_key", "hashed_name", "levenshtein"])
    ambiguous = rng.choice(_TYPES)
    candidate = ambiguous if rng.random() < 0.8 else rng.choice(_TYPES)
    if variant == "hashed_name":
        ambiguous = candidate = "person"
    constraint = ConstraintSpec(
        variant=variant,
        candidate_node_type=candidate,
        key="v" if variant in ("exact_key", "levenshtein") else None,
        max_normalized_distance=rng.choice([0.0, 0.3, 0.6])
        if variant == "levenshtein" else None,
    )
    indicators = IndicatorSpec(
        node_types=frozenset({"organization"}) if rng.random() < 0.4 else frozenset()
    )
    prior = PriorSpec(
        symmetric_alpha=rng.choice([0.0, 0.5, 1.0]),
        new_node_alpha=rng.choice([0.0, 1.0]),
    )
    return StageConfig(
        name="random",
        ambiguous_node_type=ambiguous,
        constraint=constraint,
        extractor=AttributeExtractorSpec(
            keys=("v",), normalization=rng.choice(["none", "case_fold"])
        ),
        indicators=indicators,
        prior=prior,
        tau=0.7,
    )

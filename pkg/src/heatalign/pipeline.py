"""Greedy multi-stage merging: run a scoring pass, merge winners, repeat.

After the first stage the unified graph plays both roles (self-alignment with
self-candidates excluded), so later stages see earlier merges.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Dict, List, Tuple

from .engine import AlignmentMatrix, StageConfig, eat
from .errors import ConfigError, GraphIntegrityError
from .graph import EntityNode, EventHub, FactGraph

__all__ = [
    "StageConfig",
    "MergeRecord",
    "UnifiedGraph",
    "merge_nodes",
    "union_graphs",
    "run_stage",
    "heat",
]


@dataclass(frozen=True)
class MergeRecord:
    source_id: str
    target_id: str
    probability: float
    stage: str


@dataclass
class UnifiedGraph:
    graph: FactGraph
    merge_log: List[MergeRecord] = field(default_factory=list)


def merge_log_tsv(records: List[MergeRecord]) -> str:
    lines = [
        f"{r.source_id}\t{r.target_id}\t{r.probability!r}\t{r.stage}"
        for r in records
    ]
    return "\n".join(lines) + ("\n" if lines else "")


def _merge_attributes(base: Dict[str, List[str]], extra: Dict[str, List[str]]) -> None:
    for key, values in extra.items():
        have = base.setdefault(key, [])
        for v in values:
            if v not in have:
                have.append(v)


def _resolve_mapping(mapping: Dict[str, str]) -> Dict[str, str]:
    """Collapse chains (a->b, b->c becomes a->c); cycles collapse onto their
    lexicographically smallest member."""
    resolved: Dict[str, str] = {}
    for src in mapping:
        seen = [src]
        cur = mapping[src]
        while cur in mapping and cur not in seen:
            seen.append(cur)
            cur = mapping[cur]
        if cur in seen:  # cycle
            cycle = seen[seen.index(cur):]
            cur = min(cycle)
        if cur != src:
            resolved[src] = cur
    return resolved


def merge_nodes(g: FactGraph, mapping: Dict[str, str]) -> FactGraph:
    """Remap entity ids, unioning attribute maps and collapsing duplicate facts."""
    mapping = _resolve_mapping(dict(mapping))
    for src, dst in mapping.items():
        if src not in g.entities:
            raise GraphIntegrityError(f"merge source {src!r} is not an entity")
        if dst in g.events:
            raise GraphIntegrityError(
                f"merge target {dst!r} collides with an event id"
            )
    if not mapping:
        return g

    merged: Dict[str, EntityNode] = {}
    for ent in g.entities.values():
        new_id = mapping.get(ent.id, ent.id)
        existing = merged.get(new_id)
        if existing is None:
            # the target node's own type wins when it exists in the graph
            node_type = (
                g.entities[new_id].node_type if new_id in g.entities else ent.node_type
            )
            merged[new_id] = EntityNode(new_id, node_type, {})
        _merge_attributes(merged[new_id].attributes, ent.attributes)

    # seed attribute order with the target's own attributes first
    ordered: Dict[str, EntityNode] = {}
    for new_id, node in merged.items():
        if new_id in g.entities:
            fresh = EntityNode(new_id, node.node_type, {})
            _merge_attributes(fresh.attributes, g.entities[new_id].attributes)
            _merge_attributes(fresh.attributes, node.attributes)
            ordered[new_id] = fresh
        else:
            ordered[new_id] = node

    events = [EventHub(ev.id, {k: list(v) for k, v in ev.attributes.items()})
              for ev in g.events.values()]
    facts = {
        f.__class__(f.event, f.predicate, mapping.get(f.entity, f.entity))
        for f in g.facts
    }
    return FactGraph(ordered.values(), events, facts)


def union_graphs(a: FactGraph, b: FactGraph) -> FactGraph:
    """Union by node id: shared-id entities and events merge, facts dedupe."""
    entities: Dict[str, EntityNode] = {}
    for g in (a, b):
        for ent in g.entities.values():
            existing = entities.get(ent.id)
            if existing is None:
                entities[ent.id] = EntityNode(
                    ent.id, ent.node_type, {k: list(v) for k, v in ent.attributes.items()}
                )
            else:
                if existing.node_type != ent.node_type:
                    raise GraphIntegrityError(
                        f"entity {ent.id!r} has conflicting types "
                        f"{existing.node_type!r} and {ent.node_type!r}"
                    )
                _merge_attributes(existing.attributes, ent.attributes)
    events: Dict[str, EventHub] = {}
    for g in (a, b):
        for ev in g.events.values():
            if ev.id in entities:
                raise GraphIntegrityError(
                    f"id {ev.id!r} is an entity in one graph and an event in the other"
                )
            existing = events.get(ev.id)
            if existing is None:
                events[ev.id] = EventHub(
                    ev.id, {k: list(v) for k, v in ev.attributes.items()}
                )
            else:
                _merge_attributes(existing.attributes, ev.attributes)
    facts = set(a.facts) | set(b.facts)
    return FactGraph(entities.values(), events.values(), facts)


def run_stage(
    g: FactGraph, g_prime: FactGraph, stage: StageConfig
) -> Tuple[UnifiedGraph, AlignmentMatrix]:
    """One scoring-plus-merge pass.

    Each ambiguous node whose winning real candidate beats the stage threshold
    (strictly) is remapped to the candidate's id; then the graphs are unioned.
    """
    if (
        stage.ambiguous_node_type not in g.node_types()
        and stage.ambiguous_node_type not in g_prime.node_types()
    ):
        raise ConfigError(
            f"stage {stage.name!r}: node type {stage.ambiguous_node_type!r} "
            "is absent from both graphs"
        )
    matrix = eat(g, g_prime, stage)
    mapping: Dict[str, str] = {}
    records: List[MergeRecord] = []
    for node_id in sorted(matrix.rows):
        best = matrix.rows[node_id].best_real()
        if best is not None and best.probability > stage.tau:
            mapping[node_id] = best.candidate
            records.append(
                MergeRecord(node_id, best.candidate, best.probability, stage.name)
            )
    merged = merge_nodes(g, mapping)
    unified = merged if g is g_prime else union_graphs(merged, g_prime)
    return UnifiedGraph(unified, records), matrix


def heat(g: FactGraph, g_prime: FactGraph, stages: List[StageConfig]) -> UnifiedGraph:
    """Run every stage in order, feeding each stage's unified graph to the next."""
    if not stages:
        raise ConfigError("pipeline must contain at least one stage")
    log: List[MergeRecord] = []
    cur_g, cur_gp = g, g_prime
    for stage in stages:
        unified, _matrix = run_stage(cur_g, cur_gp, stage)
        log.extend(unified.merge_log)
        cur_g = cur_gp = unified.graph
    return UnifiedGraph(cur_g, log)

"""In-memory fact graph: event hubs, attributed entity nodes, predicate edges.

A :class:`FactGraph` is immutable after construction. All queries are pure,
internal storage is kept in sorted order so that downstream iteration (and
floating-point summation) is independent of input ordering.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Dict, Iterable, List, Mapping, Tuple

from .errors import GraphIntegrityError, NodeNotFoundError

# Ids reserved by the alignment matrix serialization; real nodes may not use them.
RESERVED_IDS = frozenset({"NEW", "UNALIGNABLE"})

Attributes = Dict[str, List[str]]


@dataclass
class EntityNode:
    """An attributed entity ("object") node, e.g. a person, organization or text."""

    id: str
    node_type: str
    attributes: Attributes = field(default_factory=dict)


@dataclass
class EventHub:
    """An event node, fully defined by its facts; may carry its own attributes."""

    id: str
    attributes: Attributes = field(default_factory=dict)


@dataclass(frozen=True, order=True)
class FactTriple:
    """One (event, predicate, entity) edge. Predicates distinguish facts."""

    event: str
    predicate: str
    entity: str


@dataclass(frozen=True)
class AttributeFrequencyTable:
    """Occurrence counts of extracted attribute values over all facts of a graph."""

    counts: Mapping[str, int]

    @property
    def total(self) -> int:
        return sum(self.counts.values())


def _check_attributes(owner: str, attributes: Attributes) -> None:
    for key, values in attributes.items():
        if not isinstance(key, str) or not key:
            raise GraphIntegrityError(f"node {owner!r} has an empty attribute key")
        if not isinstance(values, list) or any(not isinstance(v, str) for v in values):
            raise GraphIntegrityError(
                f"node {owner!r} attribute {key!r} must map to a list of strings"
            )


class FactGraph:
    """Validated, immutable fact graph with indexed neighborhood queries."""

    def __init__(
        self,
        entities: Iterable[EntityNode],
        events: Iterable[EventHub],
        facts: Iterable[FactTriple],
    ):
        ent_map: Dict[str, EntityNode] = {}
        for ent in entities:
            if not ent.id:
                raise GraphIntegrityError("entity with empty id")
            if ent.id in RESERVED_IDS:
                raise GraphIntegrityError(f"entity id {ent.id!r} is reserved")
            if not ent.node_type:
                raise GraphIntegrityError(f"entity {ent.id!r} has empty node_type")
            if ent.id in ent_map:
                raise GraphIntegrityError(f"duplicate entity id {ent.id!r}")
            _check_attributes(ent.id, ent.attributes)
            ent_map[ent.id] = ent

        ev_map: Dict[str, EventHub] = {}
        for ev in events:
            if not ev.id:
                raise GraphIntegrityError("event with empty id")
            if ev.id in RESERVED_IDS:
                raise GraphIntegrityError(f"event id {ev.id!r} is reserved")
            if ev.id in ev_map:
                raise GraphIntegrityError(f"duplicate event id {ev.id!r}")
            if ev.id in ent_map:
                raise GraphIntegrityError(
                    f"id {ev.id!r} is used by both an entity and an event"
                )
            _check_attributes(ev.id, ev.attributes)
            ev_map[ev.id] = ev

        fact_set = set()
        for fact in facts:
            if fact.event not in ev_map:
                raise GraphIntegrityError(
                    f"fact {fact} references missing event {fact.event!r}"
                )
            if fact.entity not in ent_map:
                raise GraphIntegrityError(
                    f"fact {fact} references missing entity {fact.entity!r}"
                )
            fact_set.add(fact)

        participating = {f.event for f in fact_set}
        for ev_id in ev_map:
            if ev_id not in participating:
                raise GraphIntegrityError(f"event {ev_id!r} participates in no fact")

        self.entities: Dict[str, EntityNode] = {k: ent_map[k] for k in sorted(ent_map)}
        self.events: Dict[str, EventHub] = {k: ev_map[k] for k in sorted(ev_map)}
        self.facts: Tuple[FactTriple, ...] = tuple(sorted(fact_set))

        facts_by_event: Dict[str, List[FactTriple]] = {}
        events_of_entity: Dict[str, List[str]] = {}
        for fact in self.facts:
            facts_by_event.setdefault(fact.event, []).append(fact)
            evs = events_of_entity.setdefault(fact.entity, [])
            if not evs or evs[-1] != fact.event:
                if fact.event not in evs:
                    evs.append(fact.event)
        self._facts_by_event = facts_by_event
        self._events_of_entity = {k: sorted(v) for k, v in events_of_entity.items()}

    # -- queries ---------------------------------------------------------

    def entity(self, node_id: str) -> EntityNode:
        try:
            return self.entities[node_id]
        except KeyError:
            raise NodeNotFoundError(f"unknown entity id {node_id!r}") from None

    def entities_of_type(self, node_type: str) -> List[EntityNode]:
        return [e for e in self.entities.values() if e.node_type == node_type]

    def node_types(self) -> set:
        return {e.node_type for e in self.entities.values()}

    def events_of(self, node_id: str) -> List[str]:
        """Ids of the events an entity participates in, sorted."""
        self.entity(node_id)
        return self._events_of_entity.get(node_id, [])

    def markov_blanket(self, node_id: str) -> set:
        """Entities (excluding the node itself) sharing at least one event."""
        self.entity(node_id)
        neighbors = set()
        for ev in self._events_of_entity.get(node_id, ()):
            for fact in self._facts_by_event[ev]:
                neighbors.add(fact.entity)
        neighbors.discard(node_id)
        return neighbors

    def neighbor_facts(self, node_id: str) -> List[Tuple[FactTriple, EntityNode]]:
        """Facts of the node's events whose entity endpoint is a blanket member.

        Excludes the node's own facts. Sorted by (event, predicate, entity), so
        the position of a fact defines its index t in count summations.
        """
        self.entity(node_id)
        out = []
        for ev in self._events_of_entity.get(node_id, ()):
            for fact in self._facts_by_event[ev]:
                if fact.entity != node_id:
                    out.append((fact, self.entities[fact.entity]))
        out.sort(key=lambda pair: pair[0])
        return out


def load_validate(
    entities: Iterable[EntityNode],
    events: Iterable[EventHub],
    facts: Iterable[FactTriple],
) -> FactGraph:
    """Build a :class:`FactGraph`, raising :class:`GraphIntegrityError` on bad input."""
    return FactGraph(entities, events, facts)

"""File formats: line-delimited fact graphs, ground-truth pairs, pipeline configs."""
from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Dict, FrozenSet, List, Tuple

from .engine import PriorSpec, StageConfig
from .errors import ConfigError, ParseError
from .graph import EntityNode, EventHub, FactGraph, FactTriple, load_validate
from .matchers import AttributeExtractorSpec, ConstraintSpec, IndicatorSpec


@dataclass(frozen=True)
class GroundTruth:
    """Known alignments, functional in the ambiguous (post) id."""

    pairs: FrozenSet[Tuple[str, str]]

    @property
    def mapping(self) -> Dict[str, str]:
        return dict(self.pairs)

    def __len__(self) -> int:
        return len(self.pairs)


def _parse_attrs(raw, where: str) -> Dict[str, List[str]]:
    if raw is None:
        return {}
    if not isinstance(raw, dict):
        raise ParseError(f"{where}: attrs must be an object")
    out = {}
    for key, values in raw.items():
        if not isinstance(values, list) or any(not isinstance(v, str) for v in values):
            raise ParseError(f"{where}: attrs[{key!r}] must be a list of strings")
        out[key] = list(values)
    return out


def load_fact_graph(path: str) -> FactGraph:
    """Parse a line-delimited graph file and validate it.

    Records: {"kind": "entity", "id", "type", "attrs"},
    {"kind": "event", "id", "attrs"},
    {"kind": "fact", "event", "predicate", "entity"}.
    Two-pass: record order in the file does not matter.
    """
    entities: List[EntityNode] = []
    events: List[EventHub] = []
    facts: List[FactTriple] = []
    with open(path, encoding="utf-8") as handle:
        for lineno, line in enumerate(handle, start=1):
            line = line.strip()
            if not line:
                continue
            where = f"{path}:{lineno}"
            try:
                record = json.loads(line)
            except json.JSONDecodeError as exc:
                raise ParseError(f"{where}: malformed JSON ({exc.msg})") from exc
            if not isinstance(record, dict):
                raise ParseError(f"{where}: record must be an object")
            kind = record.get("kind")
            try:
                if kind == "entity":
                    entities.append(
                        EntityNode(
                            id=record["id"],
                            node_type=record["type"],
                            attributes=_parse_attrs(record.get("attrs"), where),
                        )
                    )
                elif kind == "event":
                    events.append(
                        EventHub(
                            id=record["id"],
                            attributes=_parse_attrs(record.get("attrs"), where),
                        )
                    )
                elif kind == "fact":
                    facts.append(
                        FactTriple(
                            event=record["event"],
                            predicate=record["predicate"],
                            entity=record["entity"],
                        )
                    )
                else:
                    raise ParseError(f"{where}: unknown record kind {kind!r}")
            except KeyError as exc:
                raise ParseError(f"{where}: missing field {exc.args[0]!r}") from None
    return load_validate(entities, events, facts)


def save_fact_graph(g: FactGraph, path: str) -> None:
    """Write a graph in the line-delimited format; deterministic (sorted) order."""
    with open(path, "w", encoding="utf-8") as handle:
        for ent in g.entities.values():
            handle.write(
                json.dumps(
                    {"kind": "entity", "id": ent.id, "type": ent.node_type,
                     "attrs": ent.attributes},
                    sort_keys=True, ensure_ascii=False,
                )
                + "\n"
            )
        for ev in g.events.values():
            handle.write(
                json.dumps(
                    {"kind": "event", "id": ev.id, "attrs": ev.attributes},
                    sort_keys=True, ensure_ascii=False,
                )
                + "\n"
            )
        for fact in g.facts:
            handle.write(
                json.dumps(
                    {"kind": "fact", "event": fact.event,
                     "predicate": fact.predicate, "entity": fact.entity},
                    sort_keys=True, ensure_ascii=False,
                )
                + "\n"
            )


def load_ground_truth(path: str) -> GroundTruth:
    """Read tab-separated (post_id, pre_id) pairs; duplicate post ids are rejected."""
    pairs = []
    seen = set()
    with open(path, encoding="utf-8") as handle:
        for lineno, line in enumerate(handle, start=1):
            line = line.rstrip("\n")
            if not line:
                continue
            columns = line.split("\t")
            if len(columns) != 2:
                raise ParseError(
                    f"{path}:{lineno}: expected 2 tab-separated columns, "
                    f"got {len(columns)}"
                )
            post_id, pre_id = columns
            if post_id in seen:
                raise ParseError(f"{path}:{lineno}: duplicate post id {post_id!r}")
            seen.add(post_id)
            pairs.append((post_id, pre_id))
    return GroundTruth(pairs=frozenset(pairs))


def save_ground_truth(truth: GroundTruth, path: str) -> None:
    with open(path, "w", encoding="utf-8") as handle:
        for post_id, pre_id in sorted(truth.pairs):
            handle.write(f"{post_id}\t{pre_id}\n")


def _require(obj: dict, key: str, where: str):
    if key not in obj:
        raise ConfigError(f"{where}: missing field {key!r}")
    return obj[key]


def _parse_stage(raw: dict, position: int) -> StageConfig:
    where = f"stages[{position}]"
    if not isinstance(raw, dict):
        raise ConfigError(f"{where}: stage must be an object")
    name = raw.get("name") or f"stage{position}"

    c = _require(raw, "constraint", where)
    constraint = ConstraintSpec(
        variant=_require(c, "variant", f"{where}.constraint"),
        candidate_node_type=_require(c, "candidate_node_type", f"{where}.constraint"),
        key=c.get("key"),
        max_normalized_distance=c.get("max_normalized_distance"),
    )
    e = _require(raw, "extractor", where)
    extractor = AttributeExtractorSpec(
        keys=tuple(_require(e, "keys", f"{where}.extractor")),
        normalization=e.get("normalization", "case_fold"),
    )
    i = raw.get("indicators") or {}
    indicators = IndicatorSpec(node_types=frozenset(i.get("node_types", ())))
    p = raw.get("prior") or {}
    overrides = {}
    for entry in p.get("overrides", ()):
        if not isinstance(entry, list) or len(entry) != 3:
            raise ConfigError(
                f"{where}.prior.overrides: entries must be [ambiguous_id, "
                "candidate_id, alpha]"
            )
        overrides[(entry[0], entry[1])] = float(entry[2])
    prior = PriorSpec(
        symmetric_alpha=float(p.get("symmetric_alpha", 1.0)),
        new_node_alpha=float(p.get("new_node_alpha", 1.0)),
        overrides=overrides,
    )
    tau = _require(raw, "tau", where)
    if not isinstance(tau, (int, float)) or not 0.0 <= tau <= 1.0:
        raise ConfigError(f"{where}.tau: must be a number in [0, 1]")
    return StageConfig(
        name=name,
        ambiguous_node_type=_require(raw, "ambiguous_node_type", where),
        constraint=constraint,
        extractor=extractor,
        indicators=indicators,
        prior=prior,
        tau=float(tau),
    )


def load_pipeline_config(path: str) -> List[StageConfig]:
    """Parse a JSON pipeline config: {"stages": [...]} in execution order."""
    with open(path, encoding="utf-8") as handle:
        try:
            raw = json.load(handle)
        except json.JSONDecodeError as exc:
            raise ConfigError(f"{path}: malformed JSON ({exc.msg})") from exc
    if not isinstance(raw, dict) or "stages" not in raw:
        raise ConfigError(f"{path}: top level must be an object with a 'stages' list")
    stages_raw = raw["stages"]
    if not isinstance(stages_raw, list) or not stages_raw:
        raise ConfigError(f"{path}: stages must be a non-empty list")
    return [_parse_stage(stage, i) for i, stage in enumerate(stages_raw)]

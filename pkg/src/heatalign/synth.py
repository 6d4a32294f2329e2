"""Synthetic publication-style graph pairs with planted ground truth.

The pre graph carries resolved person ids with full names; the post graph
carries ambiguous copies identified only by a first-initial+last-name key.
Persons are tied to a stable organization and to a personal set of keyword
("text") nodes; post-side keyword usages are corrupted at a configurable rate
into near-miss strings, which is what a text-alignment stage can repair.
"""
from __future__ import annotations

import random
import string
from dataclasses import dataclass
from typing import Dict, List, Set, Tuple

from .errors import ConfigError
from .graph import EntityNode, EventHub, FactGraph, FactTriple, load_validate
from .ingest import GroundTruth
from .matchers import HASHED_NAME_KEY


@dataclass(frozen=True)
class SynthSpec:
    n_true_entities: int
    duplicate_rate: float = 0.0
    events_per_entity: int = 4
    attribute_noise_rate: float = 0.0
    name_collision_rate: float = 0.0
    seed: int = 0
    # regime shape knobs (publication-style defaults)
    unique_keywords_per_entity: int = 3
    shared_keywords_per_entity: int = 2
    keywords_per_event: int = 2
    shared_vocab_size: int = 0  # 0: scaled from n_true_entities
    n_organizations: int = 0  # 0: scaled from n_true_entities

    def __post_init__(self):
        if self.n_true_entities < 1:
            raise ConfigError("n_true_entities must be >= 1")
        for name in ("duplicate_rate", "attribute_noise_rate", "name_collision_rate"):
            value = getattr(self, name)
            if not 0.0 <= value <= 1.0:
                raise ConfigError(f"{name} must be in [0, 1]")
        for name in ("events_per_entity", "unique_keywords_per_entity",
                     "keywords_per_event"):
            if getattr(self, name) < 1:
                raise ConfigError(f"{name} must be >= 1")
        if self.shared_keywords_per_entity < 0:
            raise ConfigError("shared_keywords_per_entity must be >= 0")

    @classmethod
    def from_dict(cls, raw: dict) -> "SynthSpec":
        if not isinstance(raw, dict):
            raise ConfigError("synthetic spec must be an object")
        allowed = {f for f in cls.__dataclass_fields__}
        unknown = set(raw) - allowed
        if unknown:
            raise ConfigError(f"unknown synthetic spec fields: {sorted(unknown)}")
        if "n_true_entities" not in raw:
            raise ConfigError("synthetic spec requires n_true_entities")
        return cls(**raw)


def _fresh_word(rng: random.Random, used: Set[str], lo: int = 5, hi: int = 10) -> str:
    while True:
        word = "".join(
            rng.choice(string.ascii_lowercase) for _ in range(rng.randint(lo, hi))
        )
        if word not in used:
            used.add(word)
            return word


def _corrupt(rng: random.Random, word: str, used: Set[str]) -> str:
    """One random edit, guaranteed distinct from every registered word."""
    letters = string.ascii_lowercase
    for _ in range(100):
        chars = list(word)
        op = rng.randrange(3)
        pos = rng.randrange(len(chars))
        if op == 0:
            chars[pos] = rng.choice(letters)
        elif op == 1:
            chars.insert(pos, rng.choice(letters))
        elif len(chars) > 1:
            del chars[pos]
        variant = "".join(chars)
        if variant != word and variant not in used:
            used.add(variant)
            return variant
    raise ConfigError(f"could not derive a distinct corruption of {word!r}")


class _GraphBuilder:
    def __init__(self):
        self.entities: Dict[str, EntityNode] = {}
        self.events: List[EventHub] = []
        self.facts: List[FactTriple] = []

    def entity(self, node_id: str, node_type: str, attrs: Dict[str, List[str]]):
        if node_id not in self.entities:
            self.entities[node_id] = EntityNode(node_id, node_type, attrs)
        return node_id

    def event(self, node_id: str, attrs: Dict[str, List[str]]):
        self.events.append(EventHub(node_id, attrs))
        return node_id

    def fact(self, event: str, predicate: str, entity: str):
        self.facts.append(FactTriple(event, predicate, entity))

    def build(self) -> FactGraph:
        return load_validate(self.entities.values(), self.events, self.facts)


def generate_synthetic(spec: SynthSpec) -> Tuple[FactGraph, FactGraph, GroundTruth]:
    """Deterministically generate (post_graph, pre_graph, ground_truth)."""
    rng = random.Random(spec.seed)
    n = spec.n_true_entities
    vocab_size = spec.shared_vocab_size or max(50, n // 10)
    n_orgs = spec.n_organizations or max(5, n // 20)

    used_words: Set[str] = set()
    vocab = [_fresh_word(rng, used_words) for _ in range(vocab_size)]
    org_names = [_fresh_word(rng, used_words).capitalize() for _ in range(n_orgs)]

    firsts = [_fresh_word(rng, used_words, 4, 8).capitalize() for _ in range(n)]
    lasts = [_fresh_word(rng, used_words, 4, 8).capitalize() for _ in range(n)]
    n_collide = int(round(spec.name_collision_rate * n))
    for j in range(1, n_collide, 2):
        # person j collides with person j-1: same last name, same first initial
        lasts[j] = lasts[j - 1]
        firsts[j] = firsts[j - 1][0] + firsts[j][1:]
    hashes = [f"{firsts[i][0].lower()}.{lasts[i].lower()}" for i in range(n)]

    org_of = [rng.randrange(n_orgs) for _ in range(n)]
    keyword_sets: List[List[str]] = []
    for _ in range(n):
        personal = [_fresh_word(rng, used_words)
                    for _ in range(spec.unique_keywords_per_entity)]
        shared = rng.sample(vocab, min(spec.shared_keywords_per_entity, len(vocab)))
        keyword_sets.append(personal + shared)

    pre = _GraphBuilder()
    post = _GraphBuilder()
    truth_pairs = []

    def org_id(j: int, builder: _GraphBuilder) -> str:
        return builder.entity(f"org:{j:05d}", "organization", {"name": [org_names[j]]})

    def kw_id(word: str, builder: _GraphBuilder) -> str:
        return builder.entity(f"kw:{word}", "text", {"text": [word]})

    kpe = spec.keywords_per_event
    post_events_per_entity = max(1, spec.events_per_entity // 2)

    for i in range(n):
        kws = keyword_sets[i]
        pre_person = pre.entity(
            f"pre:p{i:06d}", "person",
            {HASHED_NAME_KEY: [hashes[i]], "name": [f"{firsts[i]} {lasts[i]}"]},
        )
        for e in range(spec.events_per_entity):
            event = pre.event(f"pre:e{i:06d}x{e}", {"date": ["2018"]})
            pre.fact(event, "Author", pre_person)
            pre.fact(event, "Affiliation", org_id(org_of[i], pre))
            for t in range(kpe):
                pre.fact(event, "Keyword", kw_id(kws[(e * kpe + t) % len(kws)], pre))

        n_copies = 1 + (1 if rng.random() < spec.duplicate_rate else 0)
        for c in range(n_copies):
            suffix = "" if c == 0 else f"d{c}"
            post_person = post.entity(
                f"post:p{i:06d}{suffix}", "person", {HASHED_NAME_KEY: [hashes[i]]}
            )
            truth_pairs.append((post_person, pre_person))
            # a corrupted keyword stays corrupted for every use by this copy
            variant_of: Dict[str, str] = {}
            for word in kws:
                if rng.random() < spec.attribute_noise_rate:
                    variant_of[word] = _corrupt(rng, word, used_words)
            for e in range(post_events_per_entity):
                event = post.event(f"post:e{i:06d}{suffix}x{e}", {"date": ["2019"]})
                post.fact(event, "Author", post_person)
                post.fact(event, "Affiliation", org_id(org_of[i], post))
                for t in range(kpe):
                    word = kws[(e * kpe + t) % len(kws)]
                    if word in variant_of:
                        node = post.entity(
                            f"post:kw:{i:06d}{suffix}:{word}", "text",
                            {"text": [variant_of[word]]},
                        )
                    else:
                        node = kw_id(word, post)
                    post.fact(event, "Keyword", node)

    truth = GroundTruth(pairs=frozenset(truth_pairs))
    return post.build(), pre.build(), truth


def publication_stages(tau_text: float = 0.7, tau_person: float = 0.7,
                       alpha: float = 0.05):
    """The two-stage configuration matching the synthetic publication regime:
    a text-cleanup stage, then a person stage blocked on the name key with
    organization indicators."""
    from .engine import PriorSpec, StageConfig
    from .matchers import AttributeExtractorSpec, ConstraintSpec, IndicatorSpec

    extractor = AttributeExtractorSpec(keys=("name", "text"))
    text_stage = StageConfig(
        name="text",
        ambiguous_node_type="text",
        constraint=ConstraintSpec(
            variant="levenshtein", candidate_node_type="text",
            key="text", max_normalized_distance=0.3,
        ),
        extractor=extractor,
        indicators=IndicatorSpec(),
        prior=PriorSpec(symmetric_alpha=alpha, new_node_alpha=alpha),
        tau=tau_text,
    )
    person_stage = StageConfig(
        name="person",
        ambiguous_node_type="person",
        constraint=ConstraintSpec(
            variant="hashed_name", candidate_node_type="person",
        ),
        extractor=extractor,
        indicators=IndicatorSpec(node_types=frozenset({"organization"})),
        prior=PriorSpec(symmetric_alpha=alpha, new_node_alpha=alpha),
        tau=tau_person,
    )
    return [text_stage, person_stage]

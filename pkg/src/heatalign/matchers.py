"""Constraint functions (candidate blocking) and attribute extractors."""
from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field
from typing import Dict, FrozenSet, List, Optional, Tuple

import numpy as np

from . import kernels
from .errors import ConfigError
from .graph import AttributeFrequencyTable, EntityNode, FactGraph

NORMALIZATIONS = ("none", "case_fold", "case_fold_trim")
CONSTRAINT_VARIANTS = ("exact_key", "hashed_name", "levenshtein", "type_only")

# Attribute key conventionally carrying the provider-supplied name hash. The
# hash is treated as an opaque equality key; we never compute hashes ourselves.
HASHED_NAME_KEY = "hashed_name"


@dataclass(frozen=True)
class AttributeExtractorSpec:
    """Which attribute keys to read from a node, and how to normalize values."""

    keys: Tuple[str, ...]
    normalization: str = "case_fold"

    def __post_init__(self):
        if not self.keys or any(not k for k in self.keys):
            raise ConfigError("extractor keys must be a non-empty list of keys")
        if self.normalization not in NORMALIZATIONS:
            raise ConfigError(f"unknown normalization {self.normalization!r}")
        object.__setattr__(self, "keys", tuple(self.keys))

    def normalize(self, value: str) -> str:
        if self.normalization == "case_fold":
            return value.casefold()
        if self.normalization == "case_fold_trim":
            return value.strip().casefold()
        return value


def extract(node: EntityNode, spec: AttributeExtractorSpec) -> List[str]:
    """The node's values under spec.keys, in key then list order, normalized."""
    out = []
    for key in spec.keys:
        for value in node.attributes.get(key, ()):
            out.append(spec.normalize(value))
    return out


@dataclass(frozen=True)
class ConstraintSpec:
    """Blocking constraint restricting a node's alignment set."""

    variant: str
    candidate_node_type: str
    key: Optional[str] = None
    max_normalized_distance: Optional[float] = None

    def __post_init__(self):
        if self.variant not in CONSTRAINT_VARIANTS:
            raise ConfigError(f"unknown constraint variant {self.variant!r}")
        if not self.candidate_node_type:
            raise ConfigError("candidate_node_type must be non-empty")
        if self.variant in ("exact_key", "levenshtein") and not self.key:
            raise ConfigError(f"constraint variant {self.variant!r} requires a key")
        if self.variant == "levenshtein":
            d = self.max_normalized_distance
            if d is None or not 0.0 <= d <= 1.0:
                raise ConfigError("max_normalized_distance must be in [0, 1]")

    @property
    def value_key(self) -> Optional[str]:
        if self.variant == "hashed_name":
            return HASHED_NAME_KEY
        return self.key


@dataclass(frozen=True)
class IndicatorSpec:
    """Node types whose attributes must co-occur for an alignment to survive."""

    node_types: FrozenSet[str] = frozenset()

    def __post_init__(self):
        object.__setattr__(self, "node_types", frozenset(self.node_types))


def normalized_levenshtein(a: str, b: str) -> float:
    """Edit distance divided by max length; 0.0 when both strings are empty."""
    if not a and not b:
        return 0.0
    return kernels.distance(a, b) / max(len(a), len(b))


class LevenshteinBlocker:
    """Exact radius search over a fixed value set.

    A count-based bigram filter prunes candidates first (an edit destroys at
    most q=2 bigrams, so strings within distance k share at least
    max(len)-1-2k of them); survivors are verified with the bounded DP kernel.
    The filter only over-approximates, never drops a true match.
    """

    _GRAM_BASE = 0x110000  # one past the top code point

    def __init__(self, values: List[str], max_norm: float):
        self.values = list(values)
        self.max_norm = float(max_norm)
        self._codes = [kernels.encode(v) for v in self.values]
        self._lens = np.array([len(v) for v in self.values], dtype=np.int64)
        index: Dict[int, List[int]] = {}
        for idx, codes in enumerate(self._codes):
            c = codes.astype(np.int64)
            for gram in (c[:-1] * self._GRAM_BASE + c[1:]).tolist():
                index.setdefault(gram, []).append(idx)
        self._index = {g: np.array(p, dtype=np.int64) for g, p in index.items()}

    def _grams(self, codes: np.ndarray) -> List[int]:
        c = codes.astype(np.int64)
        return (c[:-1] * self._GRAM_BASE + c[1:]).tolist()

    def matches(self, query: str) -> List[int]:
        """Indices of stored values within normalized distance ``max_norm``."""
        if not self.values:
            return []
        qcodes = kernels.encode(query)
        lq = len(query)
        maxlen = np.maximum(lq, self._lens)
        # floor with a fuzz so that e.g. 0.3 * 10 rounds to 3, not 2
        limits = np.floor(self.max_norm * maxlen + 1e-9).astype(np.int64)
        mask = np.abs(lq - self._lens) <= limits
        required = maxlen - 1 - 2 * limits
        if required.max() > 0:
            postings = [self._index[g] for g in self._grams(qcodes) if g in self._index]
            if postings:
                counts = kernels.posting_counts(
                    np.concatenate(postings), len(self.values)
                )
            else:
                counts = np.zeros(len(self.values), dtype=np.int64)
            mask &= (counts >= required) | (required <= 0)
        out = []
        for idx in np.nonzero(mask)[0].tolist():
            limit = int(limits[idx])
            if kernels.bounded_distance(qcodes, self._codes[idx], limit) <= limit:
                out.append(idx)
        return out


class CandidateIndex:
    """Per-stage blocking index over the candidate graph's entities."""

    def __init__(
        self,
        g_prime: FactGraph,
        constraint: ConstraintSpec,
        extractor: AttributeExtractorSpec,
    ):
        self.constraint = constraint
        self.extractor = extractor
        self._nodes = g_prime.entities_of_type(constraint.candidate_node_type)
        self._by_value: Dict[str, List[str]] = {}
        self._blocker: Optional[LevenshteinBlocker] = None
        self._blocker_values: List[str] = []
        self._query_cache: Dict[Tuple[str, ...], List[str]] = {}

        if constraint.variant == "type_only":
            self._all_ids = sorted(node.id for node in self._nodes)
            return
        self._all_ids = []
        for node in self._nodes:
            for value in self._constraint_values(node):
                self._by_value.setdefault(value, []).append(node.id)
        if constraint.variant == "levenshtein":
            self._blocker_values = sorted(self._by_value)
            self._blocker = LevenshteinBlocker(
                self._blocker_values, constraint.max_normalized_distance
            )

    def _constraint_values(self, node: EntityNode) -> List[str]:
        key = self.constraint.value_key
        values = node.attributes.get(key, ())
        if self.constraint.variant == "hashed_name":
            return list(values)  # opaque equality keys, no normalization
        return [self.extractor.normalize(v) for v in values]

    def candidates_for(self, node: EntityNode, exclude_self: bool = False) -> List[str]:
        """Sorted candidate ids for one ambiguous node."""
        if self.constraint.variant == "type_only":
            ids = self._all_ids
        else:
            values = tuple(self._constraint_values(node))
            cached = self._query_cache.get(values)
            if cached is None:
                found = set()
                for value in values:
                    if self.constraint.variant == "levenshtein":
                        for idx in self._blocker.matches(value):
                            found.update(self._by_value[self._blocker_values[idx]])
                    else:
                        found.update(self._by_value.get(value, ()))
                cached = sorted(found)
                self._query_cache[values] = cached
            ids = cached
        if exclude_self:
            return [i for i in ids if i != node.id]
        return list(ids)


def candidate_set(
    node_id: str,
    g: FactGraph,
    g_prime: FactGraph,
    constraint: ConstraintSpec,
    extractor: AttributeExtractorSpec,
) -> List[str]:
    """Alignment set of one ambiguous node, sorted by id.

    When ``g`` and ``g_prime`` are the same graph the node itself is excluded.
    Builds a throwaway index; batch callers should use :class:`CandidateIndex`.
    """
    node = g.entity(node_id)
    index = CandidateIndex(g_prime, constraint, extractor)
    return index.candidates_for(node, exclude_self=g is g_prime)


def attribute_frequencies(
    g: FactGraph, extractor: AttributeExtractorSpec
) -> AttributeFrequencyTable:
    """Tally extracted entity values over every fact of the graph.

    Multiset semantics: an entity appearing in three facts contributes three
    to each of its values' counts.
    """
    counts: Counter = Counter()
    for fact in g.facts:
        counts.update(extract(g.entities[fact.entity], extractor))
    return AttributeFrequencyTable(counts=dict(counts))

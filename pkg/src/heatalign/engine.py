"""Posterior-predictive alignment scoring.

For every ambiguous node the engine blocks a candidate set, tallies
rarity-weighted attribute overlap between the two nodes' neighborhood facts,
gates it by indicator-type co-occurrence, and normalizes the resulting counts
plus Dirichlet prior mass into a categorical row over candidates and a NEW
pseudo-candidate.
"""
from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass, field
from typing import Dict, List, Mapping, Optional, Sequence, Tuple

import numpy as np

from .errors import AbsentAttributeError, ConfigError
from .graph import AttributeFrequencyTable, FactGraph
from .matchers import (
    AttributeExtractorSpec,
    CandidateIndex,
    ConstraintSpec,
    IndicatorSpec,
    attribute_frequencies,
    extract,
)

NEW_CANDIDATE = "NEW"
UNALIGNABLE = "UNALIGNABLE"

ROW_SUM_TOLERANCE = 1e-9


@dataclass(frozen=True)
class PriorSpec:
    """Dirichlet concentration parameters for one stage."""

    symmetric_alpha: float = 1.0
    new_node_alpha: float = 1.0
    overrides: Mapping[Tuple[str, str], float] = field(default_factory=dict)

    def __post_init__(self):
        values = [self.symmetric_alpha, self.new_node_alpha, *self.overrides.values()]
        for v in values:
            if not (isinstance(v, (int, float)) and math.isfinite(v) and v >= 0):
                raise ConfigError("prior concentrations must be finite and >= 0")

    def alpha_for(self, ambiguous_id: str, candidate_id: str) -> float:
        return self.overrides.get((ambiguous_id, candidate_id), self.symmetric_alpha)


@dataclass(frozen=True)
class StageConfig:
    """One pipeline stage: what to align, how to block, score and merge."""

    name: str
    ambiguous_node_type: str
    constraint: ConstraintSpec
    extractor: AttributeExtractorSpec
    indicators: IndicatorSpec = IndicatorSpec()
    prior: PriorSpec = PriorSpec()
    tau: float = 0.7

    def __post_init__(self):
        if not self.name:
            raise ConfigError("stage name must be non-empty")
        if not self.ambiguous_node_type:
            raise ConfigError(f"stage {self.name!r}: ambiguous_node_type is empty")
        if not 0.0 <= self.tau <= 1.0:
            raise ConfigError(f"stage {self.name!r}: tau must be in [0, 1]")


@dataclass(frozen=True)
class CandidateScore:
    candidate: str  # node id, or NEW_CANDIDATE
    count: float
    indicator: float
    probability: float


@dataclass
class AlignmentRow:
    """Scores for one ambiguous node, sorted by descending probability."""

    node: str
    scores: List[CandidateScore]
    unalignable: bool = False

    def best_real(self) -> Optional[CandidateScore]:
        """Mergeable winner: top real candidate, if NEW does not beat it.

        Ties between real candidates break to the lexicographically smallest
        id; a tie with NEW resolves in the real candidate's favor.
        """
        if self.unalignable:
            return None
        new_p = 0.0
        best = None
        for score in self.scores:
            if score.candidate == NEW_CANDIDATE:
                new_p = score.probability
            elif best is None or score.probability > best.probability or (
                score.probability == best.probability and score.candidate < best.candidate
            ):
                best = score
        if best is None or best.probability < new_p:
            return None
        return best


@dataclass
class AlignmentMatrix:
    """Per-ambiguous-node candidate probabilities."""

    rows: Dict[str, AlignmentRow]

    def to_tsv(self) -> str:
        """Serialize as (ambiguous_id, candidate_or_NEW, count, probability) lines.

        Rows sorted by ambiguous id then descending probability; unalignable
        rows emit one line with candidate UNALIGNABLE.
        """
        lines = []
        for node in sorted(self.rows):
            row = self.rows[node]
            if row.unalignable:
                lines.append(f"{node}\t{UNALIGNABLE}\tNA\tNA")
                continue
            for s in row.scores:
                lines.append(f"{node}\t{s.candidate}\t{s.count!r}\t{s.probability!r}")
        return "\n".join(lines) + ("\n" if lines else "")

    @classmethod
    def from_tsv(cls, text: str) -> "AlignmentMatrix":
        rows: Dict[str, AlignmentRow] = {}
        for lineno, line in enumerate(text.splitlines(), start=1):
            if not line:
                continue
            parts = line.split("\t")
            if len(parts) != 4:
                raise ConfigError(f"matrix line {lineno}: expected 4 columns")
            node, cand, count, prob = parts
            if cand == UNALIGNABLE:
                rows[node] = AlignmentRow(node, [], unalignable=True)
                continue
            row = rows.setdefault(node, AlignmentRow(node, []))
            row.scores.append(
                CandidateScore(cand, float(count), 1.0, float(prob))
            )
        return cls(rows)


def rarity_weight(value: str, freq: AttributeFrequencyTable) -> float:
    """Reciprocal of a value's fact-level occurrence count."""
    count = freq.counts.get(value, 0)
    if count < 1:
        raise AbsentAttributeError(
            f"value {value!r} does not occur in the frequency table"
        )
    return 1.0 / count


class _NeighborhoodProfile:
    """Cached per-candidate view: value tallies over neighbor facts, event count."""

    __slots__ = ("value_counts", "n_events")

    def __init__(self, g_prime: FactGraph, node_id: str, extractor: AttributeExtractorSpec):
        counts: Counter = Counter()
        for _fact, entity in g_prime.neighbor_facts(node_id):
            counts.update(extract(entity, extractor))
        self.value_counts = counts
        self.n_events = len(g_prime.events_of(node_id))


class _ProfileCache:
    def __init__(self, g_prime: FactGraph, extractor: AttributeExtractorSpec):
        self._g_prime = g_prime
        self._extractor = extractor
        self._cache: Dict[str, _NeighborhoodProfile] = {}

    def get(self, node_id: str) -> _NeighborhoodProfile:
        profile = self._cache.get(node_id)
        if profile is None:
            profile = _NeighborhoodProfile(self._g_prime, node_id, self._extractor)
            self._cache[node_id] = profile
        return profile


def _blanket_evidence(
    g: FactGraph,
    node_id: str,
    extractor: AttributeExtractorSpec,
    indicators: IndicatorSpec,
    freq: AttributeFrequencyTable,
) -> Tuple[List[Tuple[str, float]], List[str]]:
    """Split an ambiguous node's blanket into count evidence and indicator values.

    Returns (weighted values of non-indicator neighbors, indicator values).
    Values absent from the candidate graph's frequency table are skipped: their
    match bracket is necessarily zero, so the undefined 1/0 weight is unreachable.
    """
    weighted: List[Tuple[str, float]] = []
    indicator_values: List[str] = []
    for neighbor_id in sorted(g.markov_blanket(node_id)):
        neighbor = g.entities[neighbor_id]
        values = extract(neighbor, extractor)
        if neighbor.node_type in indicators.node_types:
            indicator_values.extend(values)
            continue
        for value in values:
            count = freq.counts.get(value, 0)
            if count >= 1:
                weighted.append((value, 1.0 / count))
    return weighted, indicator_values


def _indicator_from_profile(
    indicator_values: Sequence[str],
    profile: _NeighborhoodProfile,
    indicators: IndicatorSpec,
) -> float:
    if not indicators.node_types:
        return 1.0
    if profile.n_events == 0 or not indicator_values:
        return 0.0
    best = max(profile.value_counts.get(v, 0) for v in set(indicator_values))
    # capped at 1: one event can contribute several matching facts
    return min(1.0, best / profile.n_events)


def indicator_coefficient(
    n_i: str,
    n_k: str,
    g: FactGraph,
    g_prime: FactGraph,
    indicators: IndicatorSpec,
    extractor: AttributeExtractorSpec,
) -> float:
    """Multiplicative gate from must-match node types; 1.0 when none configured.

    Maximum over the ambiguous node's indicator-typed neighbor values of the
    fraction of the candidate's events covered by matching neighbor facts.
    """
    if not indicators.node_types:
        return 1.0
    indicator_values = []
    for neighbor_id in g.markov_blanket(n_i):
        neighbor = g.entities[neighbor_id]
        if neighbor.node_type in indicators.node_types:
            indicator_values.extend(extract(neighbor, extractor))
    profile = _NeighborhoodProfile(g_prime, n_k, extractor)
    return _indicator_from_profile(indicator_values, profile, indicators)


def match_count(
    n_i: str,
    n_k: str,
    g: FactGraph,
    g_prime: FactGraph,
    extractor: AttributeExtractorSpec,
    indicators: IndicatorSpec,
    freq: AttributeFrequencyTable,
) -> float:
    """Indicator-gated, rarity-weighted tally of neighborhood attribute overlap.

    Indicator-typed neighbors of the ambiguous node act only through the gate
    and are excluded from the summation.
    """
    weighted, indicator_values = _blanket_evidence(g, n_i, extractor, indicators, freq)
    profile = _NeighborhoodProfile(g_prime, n_k, extractor)
    iota = _indicator_from_profile(indicator_values, profile, indicators)
    if iota == 0.0:
        return 0.0
    total = 0.0
    for value, weight in weighted:
        hits = profile.value_counts.get(value, 0)
        if hits:
            total += weight * hits
    return iota * total


def posterior_predictive(
    counts: Sequence[float], alphas: Sequence[float]
) -> Optional[List[float]]:
    """Normalize counts plus prior mass into probabilities.

    Returns None (the unalignable signal) when every count and concentration
    is zero: a non-informative prior with no observations supports no inference.
    """
    c = np.asarray(counts, dtype=np.float64)
    a = np.asarray(alphas, dtype=np.float64)
    if c.shape != a.shape or c.ndim != 1 or c.shape[0] < 1:
        raise ValueError("counts and alphas must be equal-length 1-d sequences")
    if (c < 0).any() or (a < 0).any():
        raise ValueError("counts and alphas must be non-negative")
    total = float((c + a).sum())
    if total <= 0.0:
        return None
    return ((c + a) / total).tolist()


def eat(g: FactGraph, g_prime: FactGraph, stage: StageConfig) -> AlignmentMatrix:
    """Score every ambiguous-typed node in ``g`` against its alignment set in
    ``g_prime``.

    Rows are independent; the result does not depend on iteration order. When
    both arguments are the same graph, self-candidates are excluded.
    """
    freq = attribute_frequencies(g_prime, stage.extractor)
    index = CandidateIndex(g_prime, stage.constraint, stage.extractor)
    profiles = _ProfileCache(g_prime, stage.extractor)
    same_graph = g is g_prime
    include_new = stage.prior.new_node_alpha > 0

    rows: Dict[str, AlignmentRow] = {}
    for node in g.entities_of_type(stage.ambiguous_node_type):
        candidates = index.candidates_for(node, exclude_self=same_graph)
        weighted, indicator_values = _blanket_evidence(
            g, node.id, stage.extractor, stage.indicators, freq
        )
        counts: List[float] = []
        iotas: List[float] = []
        alphas: List[float] = []
        for cand in candidates:
            profile = profiles.get(cand)
            iota = _indicator_from_profile(indicator_values, profile, stage.indicators)
            total = 0.0
            if iota > 0.0:
                for value, weight in weighted:
                    hits = profile.value_counts.get(value, 0)
                    if hits:
                        total += weight * hits
            counts.append(iota * total)
            iotas.append(iota)
            alphas.append(stage.prior.alpha_for(node.id, cand))
        labels = list(candidates)
        if include_new:
            labels.append(NEW_CANDIDATE)
            counts.append(0.0)
            iotas.append(1.0)
            alphas.append(stage.prior.new_node_alpha)

        probs = posterior_predictive(counts, alphas) if labels else None
        if probs is None:
            rows[node.id] = AlignmentRow(node.id, [], unalignable=True)
            continue
        scores = [
            CandidateScore(label, count, iota, prob)
            for label, count, iota, prob in zip(labels, counts, iotas, probs)
        ]
        scores.sort(key=lambda s: (-s.probability, s.candidate))
        rows[node.id] = AlignmentRow(node.id, scores)
    return AlignmentMatrix(rows)

import pytest

from heatalign.engine import PriorSpec, StageConfig
from heatalign.graph import EntityNode, EventHub, FactTriple, load_validate
from heatalign.matchers import (
    AttributeExtractorSpec,
    ConstraintSpec,
    IndicatorSpec,
)


def make_graph(entities, events, facts):
    """entities: (id, type, attrs); events: (id,) or (id, attrs); facts: triples."""
    ents = [EntityNode(i, t, dict(a)) for i, t, a in entities]
    evs = [EventHub(e[0], dict(e[1]) if len(e) > 1 else {}) for e in events]
    fts = [FactTriple(*f) for f in facts]
    return load_validate(ents, evs, fts)


@pytest.fixture
def small_pair():
    """Ambiguous person X against candidate Y (count 1.5) and non-candidate Z."""
    g = make_graph(
        entities=[
            ("X", "person", {"hashed_name": ["h1"]}),
            ("ta", "text", {"text": ["alice"]}),
            ("tm", "text", {"text": ["ml"]}),
        ],
        events=[("ge1",)],
        facts=[("ge1", "Author", "X"), ("ge1", "Keyword", "ta"),
               ("ge1", "Keyword", "tm")],
    )
    g_prime = make_graph(
        entities=[
            ("Y", "person", {"hashed_name": ["h1"]}),
            ("Z", "person", {"hashed_name": ["h2"]}),
            ("pa", "text", {"text": ["alice"]}),
            ("pm", "text", {"text": ["ml"]}),
            ("ps", "text", {"text": ["stats"]}),
            ("pm2", "text", {"text": ["ml"]}),
        ],
        events=[("f1",), ("f2",)],
        facts=[
            ("f1", "Author", "Y"), ("f1", "Keyword", "pa"),
            ("f1", "Keyword", "pm"), ("f1", "Keyword", "ps"),
            ("f2", "Author", "Z"), ("f2", "Keyword", "pm2"),
        ],
    )
    return g, g_prime


@pytest.fixture
def person_stage():
    return StageConfig(
        name="person",
        ambiguous_node_type="person",
        constraint=ConstraintSpec(variant="hashed_name", candidate_node_type="person"),
        extractor=AttributeExtractorSpec(keys=("text",)),
        indicators=IndicatorSpec(),
        prior=PriorSpec(symmetric_alpha=1.0, new_node_alpha=1.0),
        tau=0.7,
    )

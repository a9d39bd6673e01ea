"""conftest holds four business headlines and their zero-shot judgments"""

import datetime
import os

import pytest
import pytz

from signet.core.types import GatewayMode, Method, RelationLabel
from signet.entities.alias_table import AliasTable
from signet.gateway.backends import Gateway
from signet.gateway.fixtures import ReplayFixture
from signet.gateway.gateway_config import GatewayConfig
from signet.ingestion.news import load_corpus
from signet.network.aggregation import build_snapshot
from signet.network.models import Window
from signet.relations.models import EntityPair, RelationObservation

FIXTURES_DIR = os.path.join(
    os.path.dirname(os.path.realpath(__file__)),
    "..",
    "..",
    "src",
    "signet",
    "resources",
    "fixtures",
    "headlines",
)

# doc, published_at, a, b, label, score
HEADLINES = [
    ("d1", "2021-04-12T14:00:00Z", "facebook", "tiktok", "negative", 0.98),
    ("d2", "2021-04-27T09:30:00Z", "apple", "facebook", "negative", 0.95),
    ("d3", "2021-04-28T16:45:00Z", "apple", "snap", "negative", 0.97),
    ("d3", "2021-04-28T16:45:00Z", "apple", "facebook", "negative", 0.96),
    ("d3", "2021-04-28T16:45:00Z", "apple", "google", "positive", 0.54),
    ("d4", "2021-04-30T11:15:00Z", "apple", "google", "neutral", 0.46),
    ("d4", "2021-04-30T11:15:00Z", "apple", "facebook", "negative", 0.70),
    ("d4", "2021-04-30T11:15:00Z", "facebook", "google", "negative", 0.64),
]

HEADLINES_WINDOW = Window(
    start=datetime.datetime(2021, 4, 3, tzinfo=pytz.UTC),
    end=datetime.datetime(2021, 5, 3, tzinfo=pytz.UTC),
)


def make_observation(
    doc_id: str,
    published_at: str,
    first: str,
    second: str,
    label: str,
    score: float,
    method: Method = Method.ZSC,
) -> RelationObservation:
    pair = EntityPair.of(first, second)
    return RelationObservation(
        pair=pair,
        label=RelationLabel.from_string(label),
        score=score,
        doc_id=doc_id,
        published_at=published_at,
        method=method,
        display_names=(pair.a.title(), pair.b.title()),
    )


@pytest.fixture()
def headlines_observations():
    return [make_observation(*row) for row in HEADLINES]


@pytest.fixture()
def headlines_snapshot(headlines_observations):
    return build_snapshot(headlines_observations, HEADLINES_WINDOW)


@pytest.fixture()
def fixtures_dir():
    return os.path.normpath(FIXTURES_DIR)


@pytest.fixture()
def headlines_corpus(fixtures_dir):
    return load_corpus(os.path.join(fixtures_dir, "corpus.jsonl"))


@pytest.fixture(scope="session")
def alias_table():
    return AliasTable.load()


@pytest.fixture()
def replay_gateway(fixtures_dir):
    config = GatewayConfig()
    config.set_mode(GatewayMode.REPLAY)
    fixture = ReplayFixture(os.path.join(fixtures_dir, "fixtures.jsonl"))
    gateway = Gateway(config, fixture)
    yield gateway
    gateway.close()

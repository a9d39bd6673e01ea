import json

import pytest
from prometheus_client import generate_latest

from signet.core.errors import (
    ConfigError,
    DeterminismError,
    EmptyCompletionError,
    ProtocolError,
    RefusalError,
)
from signet.core.types import Capability, GatewayMode
from signet.gateway.backends import (
    Gateway,
    LlmBackend,
    NerBackend,
    ZscBackend,
    count_placeholders,
)
from signet.gateway.fixtures import ReplayFixture
from signet.gateway.gateway_config import (
    GatewayConfig,
    LlmBackendConfig,
    NerBackendConfig,
    ZscBackendConfig,
)
from signet.gateway.models import ChatMessage
from signet.metrics.metrics import MetricsManager

LABELS = ["positive", "negative", "neutral"]
TEMPLATE = "the relationship between Apple and Google is {}."


class FakeTransport:
    def __init__(self, *bodies):
        self.bodies = [
            body if isinstance(body, bytes) else json.dumps(body).encode()
            for body in bodies
        ]
        self.payloads = []

    def post(self, payload):
        self.payloads.append(payload)
        return self.bodies.pop(0)


def zsc_body(**scores):
    return {"labels": list(scores), "scores": list(scores.values())}


@pytest.fixture()
def fixture(tmp_path):
    return ReplayFixture(str(tmp_path / "fixtures.jsonl"))


@pytest.mark.parametrize(
    "template, expected",
    [("{}", 1), ("a {} b", 1), ("{{}} {}", 1), ("none", 0), ("{} {}", 2)],
)
def test_count_placeholders(template, expected):
    assert count_placeholders(template) == expected


class TestModes:
    def test_replay_miss_is_fatal(self, fixture):
        transport = FakeTransport(zsc_body(positive=1.0))
        backend = ZscBackend(
            ZscBackendConfig(mode=GatewayMode.REPLAY), fixture, transport
        )

        with pytest.raises(DeterminismError):
            backend.zsc("Apple and Google", TEMPLATE, LABELS)
        assert transport.payloads == []

    def test_record_then_replay(self, fixture):
        body = zsc_body(negative=0.2, positive=0.7, neutral=0.1)
        transport = FakeTransport(body)
        recorder = ZscBackend(
            ZscBackendConfig(mode=GatewayMode.RECORD), fixture, transport
        )

        recorded = recorder.zsc("Apple and Google", TEMPLATE, LABELS)

        assert len(transport.payloads) == 1
        assert len(fixture) == 1

        silent = FakeTransport()
        player = ZscBackend(
            ZscBackendConfig(mode=GatewayMode.REPLAY), fixture, silent
        )
        assert player.zsc("Apple  and Google", TEMPLATE, LABELS) == recorded
        assert silent.payloads == []

    def test_record_reuses_fixture(self, fixture):
        transport = FakeTransport(zsc_body(positive=1.0, negative=0.0))
        backend = ZscBackend(
            ZscBackendConfig(mode=GatewayMode.RECORD), fixture, transport
        )

        first = backend.zsc("x", "{}", ["positive", "negative"])
        second = backend.zsc("x", "{}", ["positive", "negative"])

        assert first == second
        assert len(transport.payloads) == 1

    def test_undecodable_response_is_not_recorded(self, fixture):
        transport = FakeTransport(b"not json")
        backend = ZscBackend(
            ZscBackendConfig(mode=GatewayMode.RECORD), fixture, transport
        )

        with pytest.raises(ProtocolError):
            backend.zsc("x", "{}", ["positive"])
        assert len(fixture) == 0

    def test_model_is_part_of_the_digest(self, fixture):
        first = ZscBackend(ZscBackendConfig(mode=GatewayMode.REPLAY), fixture)
        second = ZscBackend(
            ZscBackendConfig(mode=GatewayMode.REPLAY, model_id="other"),
            fixture,
        )
        payload = {"premise": "x"}
        assert first.digest(payload) != second.digest(payload)

    def test_non_live_needs_fixture(self):
        with pytest.raises(ConfigError):
            ZscBackend(ZscBackendConfig(mode=GatewayMode.REPLAY))

    def test_live_needs_endpoint(self):
        backend = ZscBackend(ZscBackendConfig())
        with pytest.raises(ConfigError):
            backend.zsc("x", "{}", ["positive"])

    def test_metrics(self, fixture):
        metrics = MetricsManager()
        transport = FakeTransport(zsc_body(positive=1.0))
        backend = ZscBackend(ZscBackendConfig(), None, transport, metrics)

        backend.zsc("x", "{}", ["positive"])

        output = generate_latest(metrics.registry).decode()
        assert (
            'signet_backend_requests_total{capability="zsc",outcome="live"}'
            " 1.0"
        ) in output


class TestZsc:
    def backend(self, *bodies):
        return ZscBackend(ZscBackendConfig(), None, FakeTransport(*bodies))

    def test_ranked(self):
        backend = self.backend(
            zsc_body(neutral=0.2, negative=0.4, positive=0.4)
        )

        result = backend.zsc("x", TEMPLATE, LABELS)

        assert result.labels == ["negative", "positive", "neutral"]
        assert result.top_label == "negative"
        assert result.top_score == 0.4

    def test_payload(self):
        backend = self.backend(zsc_body(positive=1.0))
        backend.zsc("Apple", "{}", ["positive"], multi_label=True)
        assert backend.transport.payloads == [
            {
                "premise": "Apple",
                "hypothesis_template": "{}",
                "candidate_labels": ["positive"],
                "multi_label": True,
            }
        ]

    @pytest.mark.parametrize(
        "body",
        [
            zsc_body(positive=0.5, negative=0.5),
            zsc_body(positive=0.5, negative=0.2, neutral=0.2),
            {"labels": LABELS, "scores": [1.0]},
            {"labels": LABELS},
            [1, 2, 3],
        ],
    )
    def test_protocol_errors(self, body):
        with pytest.raises(ProtocolError):
            self.backend(body).zsc("x", TEMPLATE, LABELS)

    def test_multi_label_scores(self):
        backend = self.backend(zsc_body(positive=0.9, negative=0.8))
        result = backend.zsc("x", "{}", ["positive", "negative"], True)
        assert result.scores == [0.9, 0.8]

    @pytest.mark.parametrize(
        "template, labels",
        [
            ("no placeholder", LABELS),
            ("{} and {}", LABELS),
            (TEMPLATE, []),
            (TEMPLATE, ["positive", "positive"]),
        ],
    )
    def test_invalid_requests(self, template, labels):
        with pytest.raises(ValueError):
            self.backend().zsc("x", template, labels)


class TestNer:
    TEXT = "Apple and Google compete against Facebook"

    def backend(self, *mentions):
        return NerBackend(
            NerBackendConfig(),
            None,
            FakeTransport({"mentions": list(mentions)}),
        )

    @staticmethod
    def mention(text, start, label="ORG"):
        return {
            "text": text,
            "start": start,
            "end": start + len(text),
            "label": label,
            "score": 0.99,
        }

    def test_filters_and_sorts(self):
        backend = self.backend(
            self.mention("Google", 10),
            self.mention("Facebook", 33),
            self.mention("Apple", 0, "PER"),
            self.mention("Apple", 0, "organization"),
        )

        mentions = backend.ner(self.TEXT)

        assert [(m.surface, m.start) for m in mentions] == [
            ("Apple", 0),
            ("Google", 10),
            ("Facebook", 33),
        ]

    def test_span_mismatch(self):
        with pytest.raises(ProtocolError):
            self.backend(self.mention("Google", 11)).ner(self.TEXT)

    def test_span_out_of_text(self):
        with pytest.raises(ProtocolError):
            self.backend(self.mention("Facebook", 40)).ner(self.TEXT)

    def test_empty_text(self):
        with pytest.raises(ValueError):
            self.backend().ner("   ")


class TestLlm:
    MESSAGES = [ChatMessage(role="user", content="Apple and Google")]

    def backend(self, body):
        return LlmBackend(LlmBackendConfig(), None, FakeTransport(body))

    def test_complete(self):
        backend = self.backend({"text": "positive", "model": "gpt-4-0613"})

        result = backend.complete(self.MESSAGES)

        assert result.text == "positive"
        assert result.model_id == "gpt-4-0613"
        assert backend.transport.payloads[0]["messages"] == [
            {"role": "user", "content": "Apple and Google"}
        ]

    def test_default_model(self):
        result = self.backend({"text": "x"}).complete(self.MESSAGES)
        assert result.model_id == "gpt-4"

    def test_refusal(self):
        with pytest.raises(RefusalError):
            self.backend({"text": "", "refusal": "no"}).complete(
                self.MESSAGES
            )

    def test_empty(self):
        with pytest.raises(EmptyCompletionError):
            self.backend({"text": ""}).complete(self.MESSAGES)

    def test_missing_text(self):
        with pytest.raises(ProtocolError):
            self.backend({"completion": "x"}).complete(self.MESSAGES)

    def test_empty_prompt(self):
        with pytest.raises(ValueError):
            self.backend({"text": "x"}).complete([])


class TestGateway:
    def test_transports_per_capability(self):
        transport = FakeTransport({"text": "ok"})
        gateway = Gateway(
            GatewayConfig(), transports={Capability.LLM: transport}
        )

        gateway.llm.complete(TestLlm.MESSAGES)

        assert len(transport.payloads) == 1
        gateway.close()

    def test_set_mode(self, fixture):
        config = GatewayConfig()
        config.set_mode(GatewayMode.REPLAY)

        gateway = Gateway(config, fixture)

        assert gateway.ner.config.mode == GatewayMode.REPLAY
        assert gateway.llm.config.mode == GatewayMode.REPLAY

    def test_environment_overrides(self, monkeypatch):
        monkeypatch.setenv("SIGNET_ZSC_ENDPOINT", "http://zsc.test")
        monkeypatch.setenv("SIGNET_LLM_MODEL", "gpt-4o")

        config = GatewayConfig()

        assert config.zsc.endpoint == "http://zsc.test"
        assert config.llm.model_id == "gpt-4o"
        assert config.ner.endpoint is None

"""
backends implements the three remote model capabilities on top of a
transport and the record/replay fixture store
"""

import json
import string
import threading
from typing import Any, Callable, Dict, List, Optional, TypeVar

from pydantic import ValidationError

from signet.core.errors import (
    ConfigError,
    DeterminismError,
    EmptyCompletionError,
    ProtocolError,
    RefusalError,
)
from signet.core.logging import logging
from signet.core.types import Capability, GatewayMode
from signet.gateway.fixtures import ReplayFixture, canonical_digest
from signet.gateway.gateway_config import (
    BackendConfig,
    GatewayConfig,
    LlmBackendConfig,
    NerBackendConfig,
    ZscBackendConfig,
)
from signet.gateway.models import (
    SINGLE_LABEL_TOLERANCE,
    ChatMessage,
    LlmResult,
    MentionResult,
    ZscResult,
)
from signet.gateway.transport import HttpTransport, Transport
from signet.metrics.metrics import MetricsManager

T = TypeVar("T")


def count_placeholders(template: str) -> int:
    """
    Counts the replacement fields of a str.format style template.
    Doubled braces are literals

    :param template: Template text
    :return: Number of fields
    :raises ValueError: If the braces are unbalanced
    """
    return sum(
        1
        for _, field, _, _ in string.Formatter().parse(template)
        if field is not None
    )


class Backend:
    """
    Backend sends requests for one capability. Live requests are
    bounded by max_in_flight permits; in replay mode requests are only
    ever answered from the fixture
    """

    capability: Capability
    config: BackendConfig

    def __init__(
        self,
        config: BackendConfig,
        fixture: Optional[ReplayFixture] = None,
        transport: Optional[Transport] = None,
        metrics: Optional[MetricsManager] = None,
    ):
        if config.mode != GatewayMode.LIVE and fixture is None:
            raise ConfigError(
                "fixtures",
                f"{self.capability} backend in {config.mode} mode requires"
                " a replay fixture",
            )

        self.config = config
        self.fixture = fixture
        self.metrics = metrics
        self._transport = transport
        self._transport_lock = threading.Lock()
        self._permits = threading.BoundedSemaphore(config.max_in_flight)

    @property
    def transport(self) -> Transport:
        """
        Property that holds the transport, created on first live use
        """
        with self._transport_lock:
            if self._transport is None:
                if not self.config.endpoint:
                    raise ConfigError(
                        f"{self.capability}.endpoint",
                        f"{self.config.mode} mode requires an endpoint",
                    )
                self._transport = HttpTransport(
                    self.config,
                    str(self.capability),
                    on_retry=(
                        self.metrics.record_retry if self.metrics else None
                    ),
                )

            return self._transport

    def digest(self, payload: dict) -> str:
        """
        Computes the fixture digest of a request

        :param payload: Wire request
        :return: Request digest
        """
        return canonical_digest(
            {
                "capability": str(self.capability),
                "model": self.config.model_id,
                "request": payload,
            }
        )

    def _count(self, outcome: str) -> None:
        if self.metrics is not None:
            self.metrics.record_request(str(self.capability), outcome)

    def call(self, payload: dict, decode: Callable[[bytes], T]) -> T:
        """
        Sends a request according to the backend mode. A response is
        only recorded once it decodes

        :param payload: Wire request
        :param decode: Response decoder, raising ProtocolError
        :return: Decoded response
        """
        digest = self.digest(payload)
        if self.config.mode != GatewayMode.LIVE:
            recorded = self.fixture.get(digest)
            if recorded is not None:
                self._count("replay_hit")
                return decode(recorded)

        if self.config.mode == GatewayMode.REPLAY:
            self._count("error")
            raise DeterminismError(str(self.capability), digest)

        try:
            with self._permits:
                body = self.transport.post(payload)
            decoded = decode(body)
        except Exception:
            self._count("error")
            raise

        if self.config.mode == GatewayMode.RECORD:
            self.fixture.append(digest, body)
            self._count("recorded")
        else:
            self._count("live")

        return decoded

    def decode_json(self, body: bytes) -> Dict[str, Any]:
        """
        Decodes a JSON object response body

        :param body: Response body
        :return: Decoded object
        """
        try:
            data = json.loads(body)
        except (ValueError, UnicodeDecodeError) as exc:
            raise ProtocolError(
                str(self.capability), f"invalid JSON body: {exc}"
            ) from exc

        if not isinstance(data, dict):
            raise ProtocolError(
                str(self.capability), "response body is not an object"
            )

        return data

    def close(self) -> None:
        """
        Close the transport, if one was created
        """
        if self._transport is not None and hasattr(self._transport, "close"):
            self._transport.close()


class NerBackend(Backend):
    """
    NerBackend finds organization mentions in text
    """

    capability = Capability.NER
    config: NerBackendConfig

    def _decoder(self, text: str) -> Callable[[bytes], List[MentionResult]]:
        def decode(body: bytes) -> List[MentionResult]:
            data = self.decode_json(body)
            if not isinstance(data.get("mentions"), list):
                raise ProtocolError("ner", "missing 'mentions' list")

            mentions = []
            for raw in data["mentions"]:
                try:
                    mention = MentionResult(
                        surface=raw["text"],
                        start=raw["start"],
                        end=raw["end"],
                        label=raw["label"],
                        score=raw["score"],
                    )
                except (KeyError, TypeError, ValidationError) as exc:
                    raise ProtocolError(
                        "ner", f"invalid mention {raw!r}: {exc}"
                    ) from exc

                if mention.end > len(text):
                    raise ProtocolError(
                        "ner", f"span {mention.span} exceeds the text"
                    )
                if text[mention.start : mention.end] != mention.surface:
                    raise ProtocolError(
                        "ner",
                        f"span {mention.span} does not match surface"
                        f" '{mention.surface}'",
                    )
                mentions.append(mention)

            return mentions

        return decode

    def ner(self, text: str) -> List[MentionResult]:
        """
        Recognizes organization mentions

        :param text: Source text
        :return: Organization mentions sorted by start offset
        """
        if not text.strip():
            raise ValueError("ner text must be non-empty")

        mentions = self.call({"text": text}, self._decoder(text))
        allowed = {label.upper() for label in self.config.entity_labels}
        return sorted(
            (m for m in mentions if m.label.upper() in allowed),
            key=lambda m: (m.start, m.end),
        )


class ZscBackend(Backend):
    """
    ZscBackend scores candidate labels against a premise by entailment
    """

    capability = Capability.ZSC
    config: ZscBackendConfig

    def _decoder(
        self, candidate_labels: List[str], multi_label: bool
    ) -> Callable[[bytes], ZscResult]:
        def decode(body: bytes) -> ZscResult:
            data = self.decode_json(body)
            labels, scores = data.get("labels"), data.get("scores")
            if not isinstance(labels, list) or not isinstance(scores, list):
                raise ProtocolError("zsc", "missing 'labels' or 'scores'")
            if len(labels) != len(scores):
                raise ProtocolError("zsc", "labels and scores differ in size")
            if sorted(labels) != sorted(candidate_labels):
                raise ProtocolError(
                    "zsc", f"labels {labels} do not match the candidates"
                )
            if not multi_label and (
                abs(sum(scores) - 1.0) > SINGLE_LABEL_TOLERANCE
            ):
                raise ProtocolError(
                    "zsc", f"single-label scores sum to {sum(scores)}"
                )

            ranked = sorted(zip(labels, scores), key=lambda p: (-p[1], p[0]))
            try:
                return ZscResult(
                    labels=[label for label, _ in ranked],
                    scores=[score for _, score in ranked],
                )
            except ValidationError as exc:
                raise ProtocolError("zsc", str(exc)) from exc

        return decode

    def zsc(
        self,
        premise: str,
        hypothesis_template: str,
        candidate_labels: List[str],
        multi_label: bool = False,
    ) -> ZscResult:
        """
        Classifies a premise against candidate labels

        :param premise: Text to classify
        :param hypothesis_template: Hypothesis with one {} placeholder
        :param candidate_labels: Labels, instantiated in this order
        :param multi_label: True to score labels independently
        :return: Labels by descending score, ties broken by label
        """
        if not candidate_labels:
            raise ValueError("candidate_labels must be non-empty")
        if len(set(candidate_labels)) != len(candidate_labels):
            raise ValueError("candidate_labels must be distinct")
        if count_placeholders(hypothesis_template) != 1:
            raise ValueError(
                f"hypothesis template '{hypothesis_template}' must contain"
                " exactly one placeholder"
            )

        payload = {
            "premise": premise,
            "hypothesis_template": hypothesis_template,
            "candidate_labels": list(candidate_labels),
            "multi_label": multi_label,
        }
        return self.call(
            payload, self._decoder(list(candidate_labels), multi_label)
        )


class LlmBackend(Backend):
    """
    LlmBackend completes chat prompts with an instruction-tuned model
    """

    capability = Capability.LLM
    config: LlmBackendConfig

    def _decode(self, body: bytes) -> Dict[str, Any]:
        data = self.decode_json(body)
        if not isinstance(data.get("text"), str):
            raise ProtocolError("llm", "missing 'text'")
        if "refusal" in data and not isinstance(
            data["refusal"], (str, type(None))
        ):
            raise ProtocolError("llm", "'refusal' must be a string")

        return data

    def complete(self, messages: List[ChatMessage]) -> LlmResult:
        """
        Completes a prompt

        :param messages: Prompt messages
        :return: Completion, verbatim
        :raises RefusalError: If the model refused
        :raises EmptyCompletionError: If the completion is empty
        """
        if not messages:
            raise ValueError("prompt must be non-empty")

        payload = {
            "model": self.config.model_id,
            "messages": [
                {"role": m.role, "content": m.content} for m in messages
            ],
        }
        data = self.call(payload, self._decode)
        model_id = data.get("model") or self.config.model_id
        if data.get("refusal"):
            raise RefusalError(model_id, data["refusal"])
        if not data["text"]:
            raise EmptyCompletionError(model_id, "empty completion")

        return LlmResult(text=data["text"], model_id=model_id)


class Gateway:
    """
    Gateway bundles the three backends built from one configuration.
    It is shareable across threads
    """

    def __init__(
        self,
        config: GatewayConfig,
        fixture: Optional[ReplayFixture] = None,
        transports: Optional[Dict[Capability, Transport]] = None,
        metrics: Optional[MetricsManager] = None,
    ):
        """
        Initialize the gateway

        :param config: Gateway configuration
        :param fixture: Fixture store, required by record and replay
        :param transports: Transports per capability, replacing HTTP
        :param metrics: Metrics manager counting requests
        """
        transports = transports or {}
        self.config = config
        self.fixture = fixture
        self.ner = NerBackend(
            config.ner, fixture, transports.get(Capability.NER), metrics
        )
        self.zsc = ZscBackend(
            config.zsc, fixture, transports.get(Capability.ZSC), metrics
        )
        self.llm = LlmBackend(
            config.llm, fixture, transports.get(Capability.LLM), metrics
        )
        logging.debug(
            "Gateway ready: ner=%s zsc=%s llm=%s",
            config.ner.mode,
            config.zsc.mode,
            config.llm.mode,
        )

    def close(self) -> None:
        """
        Close every backend
        """
        for backend in (self.ner, self.zsc, self.llm):
            backend.close()

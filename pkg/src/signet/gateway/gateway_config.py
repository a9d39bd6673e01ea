"""
gateway_config centralizes all the configuration loading for the
inference gateway
"""

import datetime
import os
from typing import Annotated, List, Optional

from pydantic import BaseModel, BeforeValidator, Field

from signet.core.types import Capability, GatewayMode
from signet.core.utils import parse_timedelta

ENV_PREFIX = "SIGNET"


class BackendConfig(BaseModel):
    """
    BackendConfig holds the configuration of one remote capability

    * endpoint: URL the requests are POSTed to
    * model_id: Model identifier, part of every request digest
    * timeout: Request timeout
    * max_retries: Retries after the first attempt
    * max_in_flight: Concurrent requests allowed
    * mode: live, record or replay
    * backoff_base: First backoff ceiling
    * backoff_cap: Largest backoff ceiling
    """

    endpoint: Optional[str] = None
    model_id: str
    timeout: Annotated[
        datetime.timedelta, BeforeValidator(parse_timedelta)
    ] = datetime.timedelta(seconds=30)
    max_retries: int = Field(default=3, ge=0)
    max_in_flight: int = Field(default=4, ge=1)
    mode: GatewayMode = GatewayMode.LIVE
    backoff_base: Annotated[
        datetime.timedelta, BeforeValidator(parse_timedelta)
    ] = datetime.timedelta(milliseconds=250)
    backoff_cap: Annotated[
        datetime.timedelta, BeforeValidator(parse_timedelta)
    ] = datetime.timedelta(seconds=8)


class NerBackendConfig(BackendConfig):
    """
    NerBackendConfig adds the entity categories kept by the default
    post-filter
    """

    model_id: str = "xlm-roberta-large-finetuned-conll03-english"
    entity_labels: List[str] = ["ORG", "ORGANIZATION"]


class ZscBackendConfig(BackendConfig):
    """
    ZscBackendConfig holds the zero-shot classifier configuration
    """

    model_id: str = "bart-large-mnli"


class LlmBackendConfig(BackendConfig):
    """
    LlmBackendConfig holds the instruction-tuned LLM configuration
    """

    model_id: str = "gpt-4"
    timeout: Annotated[
        datetime.timedelta, BeforeValidator(parse_timedelta)
    ] = datetime.timedelta(seconds=120)


class GatewayConfig(BaseModel):
    """
    GatewayConfig holds the three backend configurations. Endpoints and
    models can be overridden with SIGNET_<CAP>_ENDPOINT and
    SIGNET_<CAP>_MODEL
    """

    ner: NerBackendConfig = Field(default_factory=NerBackendConfig)
    zsc: ZscBackendConfig = Field(default_factory=ZscBackendConfig)
    llm: LlmBackendConfig = Field(default_factory=LlmBackendConfig)

    def model_post_init(self, _):
        for capability in Capability:
            backend: BackendConfig = self.backend(capability)
            prefix = f"{ENV_PREFIX}_{capability.value.upper()}"
            endpoint = os.environ.get(f"{prefix}_ENDPOINT")
            model = os.environ.get(f"{prefix}_MODEL")
            if endpoint:
                backend.endpoint = endpoint
            if model:
                backend.model_id = model

    def backend(self, capability: Capability) -> BackendConfig:
        """
        Get the configuration of a capability

        :param capability: Capability to get
        :return: Backend configuration
        """
        return getattr(self, capability.value)

    def set_mode(self, mode: GatewayMode) -> None:
        """
        Set the same mode on every backend

        :param mode: Mode to set
        """
        for capability in Capability:
            self.backend(capability).mode = mode

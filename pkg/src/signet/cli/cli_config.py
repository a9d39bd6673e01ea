"""
cli_config aggregates the component configurations into the run
configuration used by the command line
"""

import io
import os
from typing import Any, Dict, List, Optional

from pydantic import BaseModel, Field, PrivateAttr, ValidationError

from signet.core.config import ConfigLoader, deep_merge
from signet.core.errors import ConfigError
from signet.core.types import Capability, ErrorPolicy, GatewayMode
from signet.core.utils import canonical_json, sha256
from signet.entities.entities_config import EntityConfig
from signet.explanation.explanation_config import ExplanationConfig
from signet.gateway.gateway_config import GatewayConfig
from signet.ingestion.ingestion_config import IngestionConfig
from signet.metrics.metrics_config import MetricsConfig
from signet.network.network_config import NetworkConfig
from signet.relations.relations_config import RelationConfig


class PathsConfig(BaseModel):
    """
    PathsConfig holds the files a run reads and writes

    * corpus: Line-delimited news corpus
    * fixtures: Replay fixture file
    * output_dir: Directory receiving the run outputs
    """

    corpus: Optional[str] = None
    fixtures: Optional[str] = None
    output_dir: str = "out"


class RunConfig(BaseModel):
    """
    RunConfig holds the whole configuration of a run. The mode is
    applied to every backend of the gateway

    * zsc_enabled: False to skip the zero-shot pipeline
    * max_workers: Items processed concurrently
    """

    paths: PathsConfig = Field(default_factory=PathsConfig)
    mode: GatewayMode = GatewayMode.LIVE
    on_error: ErrorPolicy = ErrorPolicy.FAIL
    max_workers: int = Field(default=4, ge=1)
    zsc_enabled: bool = True
    gateway: GatewayConfig = Field(default_factory=GatewayConfig)
    ingestion: IngestionConfig = Field(default_factory=IngestionConfig)
    entities: EntityConfig = Field(default_factory=EntityConfig)
    relations: RelationConfig = Field(default_factory=RelationConfig)
    explanation: ExplanationConfig = Field(
        default_factory=ExplanationConfig
    )
    network: NetworkConfig = Field(default_factory=NetworkConfig)
    metrics: MetricsConfig = Field(default_factory=MetricsConfig)
    _base_dir: Optional[str] = PrivateAttr(default=None)

    def model_post_init(self, _):
        self.gateway.set_mode(self.mode)

    def digest(self) -> str:
        """
        Computes the configuration digest. The output directory is left
        out and paths are taken relative to the configuration file, so
        the same run in another checkout keeps its digest

        :return: sha256 of the canonical configuration
        """
        data = self.model_dump(mode="json")
        del data["paths"]["output_dir"]
        if self._base_dir:
            for section, field in PATH_FIELDS:
                value = data[section].get(field)
                if isinstance(value, str) and os.path.isabs(value):
                    data[section][field] = os.path.relpath(
                        value, self._base_dir
                    ).replace(os.sep, "/")
        return sha256(canonical_json(data))

    def capabilities(self) -> List[Capability]:
        """
        Get the capabilities the enabled pipelines use

        :return: Capabilities, in declaration order
        """
        needed = set()
        if self.zsc_enabled:
            needed.update((Capability.NER, Capability.ZSC))
        if self.ingestion.stock_filter.enabled:
            needed.add(Capability.ZSC)
        if self.explanation.enabled:
            needed.add(Capability.LLM)
        return [cap for cap in Capability if cap in needed]

    def validate_run(
        self,
        require_corpus: bool = True,
        capabilities: Optional[List[Capability]] = None,
    ) -> None:
        """
        Checks the configuration can drive a pipeline run

        :param require_corpus: True when the run reads paths.corpus
        :param capabilities: Capabilities used, those of the enabled
            pipelines when None
        :raises ConfigError: Naming the first invalid field
        """
        if capabilities is None:
            capabilities = self.capabilities()

        if require_corpus and not self.paths.corpus:
            raise ConfigError("corpus", "no corpus path")
        if require_corpus and not os.path.exists(self.paths.corpus):
            raise ConfigError(
                "corpus", f"'{self.paths.corpus}' does not exist"
            )

        alias_table = self.entities.alias_table
        if alias_table and not os.path.exists(alias_table):
            raise ConfigError("alias_table", f"'{alias_table}' does not exist")

        if not capabilities:
            return

        if self.mode != GatewayMode.LIVE and not self.paths.fixtures:
            raise ConfigError("fixtures", f"{self.mode} mode needs fixtures")
        if self.mode == GatewayMode.REPLAY and not os.path.exists(
            self.paths.fixtures
        ):
            raise ConfigError(
                "fixtures", f"'{self.paths.fixtures}' does not exist"
            )

        if self.mode != GatewayMode.REPLAY:
            for capability in capabilities:
                if not self.gateway.backend(capability).endpoint:
                    raise ConfigError(
                        f"gateway.{capability}.endpoint",
                        f"{self.mode} mode needs an endpoint",
                    )


PATH_FIELDS = (
    ("paths", "corpus"),
    ("paths", "fixtures"),
    ("paths", "output_dir"),
    ("entities", "alias_table"),
)


def resolve_paths(data: Dict[str, Any], base_dir: str) -> Dict[str, Any]:
    """
    Makes the relative paths of a configuration file relative to the
    directory holding it

    :param data: Raw configuration
    :param base_dir: Directory of the configuration file
    :return: Configuration with resolved paths
    """
    data = deep_merge(data, {})
    for section, field in PATH_FIELDS:
        values = data.get(section)
        if not isinstance(values, dict):
            continue
        value = values.get(field)
        if isinstance(value, str) and not os.path.isabs(value):
            data[section] = dict(values)
            data[section][field] = os.path.normpath(
                os.path.join(base_dir, value)
            )
    return data


def load_run_config(
    config: str | dict | io.IOBase | None = None,
    overrides: Optional[Dict[str, Any]] = None,
) -> RunConfig:
    """
    Loads the run configuration. Flags given as overrides win over the
    file, which wins over the defaults

    :param config: Configuration file, stream or data
    :param overrides: Values set on the command line
    :return: Run configuration
    :raises ConfigError: If the configuration is invalid
    """
    try:
        data = ConfigLoader().read(config) or {}
    except (OSError, ValueError) as exc:
        raise ConfigError("config", str(exc)) from exc

    base_dir = None
    if isinstance(config, str):
        base_dir = os.path.dirname(os.path.abspath(config))
        data = resolve_paths(data, base_dir)

    data = deep_merge(data, overrides or {})
    try:
        run_config = RunConfig(**data)
    except ValidationError as exc:
        error = exc.errors()[0]
        field = ".".join(str(loc) for loc in error["loc"]) or "config"
        raise ConfigError(field, error["msg"]) from exc

    run_config._base_dir = base_dir
    return run_config

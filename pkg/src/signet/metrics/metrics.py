"""
Module for managing the metrics of a pipeline run.
"""

import os
from typing import Optional

from prometheus_client import (
    CollectorRegistry,
    Counter,
    Gauge,
    generate_latest,
    write_to_textfile,
)

from signet.core.logging import logging
from signet.metrics.metrics_config import MetricsConfig


class MetricsManager:
    """Groups all the metrics of one run in a private registry."""

    def __init__(self, config: Optional[MetricsConfig] = None):
        self.config = config or MetricsConfig()
        self.registry = CollectorRegistry()
        self.backend_requests = Counter(
            name="signet_backend_requests",
            documentation="Backend requests by outcome",
            labelnames=["capability", "outcome"],
            registry=self.registry,
        )
        self.backend_retries = Counter(
            name="signet_backend_retries",
            documentation="Backend request retries",
            labelnames=["capability"],
            registry=self.registry,
        )
        self.stage_items = Gauge(
            name="signet_stage_items",
            documentation="Items produced by a pipeline stage",
            labelnames=["stage"],
            registry=self.registry,
        )
        self.stage_seconds = Gauge(
            name="signet_stage_seconds",
            documentation="Wall-clock seconds spent in a pipeline stage",
            labelnames=["stage"],
            registry=self.registry,
        )

    def record_request(self, capability: str, outcome: str) -> None:
        """
        Count a backend request

        :param capability: Capability called
        :param outcome: live, replay_hit, recorded or error
        """
        self.backend_requests.labels(
            capability=capability, outcome=outcome
        ).inc()

    def record_retry(self, capability: str) -> None:
        """
        Count a backend retry

        :param capability: Capability retried
        """
        self.backend_retries.labels(capability=capability).inc()

    def record_stage(self, stage: str, items: int, seconds: float) -> None:
        """
        Set the size and duration of a stage

        :param stage: Stage name
        :param items: Items produced
        :param seconds: Wall-clock seconds
        """
        self.stage_items.labels(stage=stage).set(items)
        self.stage_seconds.labels(stage=stage).set(seconds)

    def get_metrics(self) -> bytes:
        """
        Generate the latest metrics from the registry.

        :returns: A bytes object containing the latest metrics.
        """
        return generate_latest(self.registry)

    def save_metrics(self, out_dir: str) -> Optional[str]:
        """
        Save the current metrics to a file in the output directory.

        :param out_dir: Output directory
        :return: Path written, None when metrics are disabled
        """
        if not self.config.enabled:
            return None

        metrics_file = os.path.join(out_dir, self.config.file_name)
        logging.debug("Saving prometheus metrics to '%s'", metrics_file)
        write_to_textfile(metrics_file, self.registry)
        return metrics_file

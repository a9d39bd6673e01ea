"""
metrics_config holds the configuration class for the metrics module
"""

from pydantic import BaseModel


class MetricsConfig(BaseModel):
    """
    MetricsConfig holds configuration for the metrics module

    * file_name: Name of the textfile written to the output directory
    * enabled: True to enable metrics, False to disable
    """

    file_name: str = "metrics.prom"
    enabled: bool = True

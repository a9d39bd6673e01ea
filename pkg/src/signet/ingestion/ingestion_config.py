"""
ingestion_config centralizes all the configuration loading for corpus
ingestion and the stock news filter
"""

from typing import Dict, List

from pydantic import BaseModel, Field, model_validator

from signet.core.types import ErrorPolicy, PremiseSource
from signet.gateway.gateway_config import BackendConfig


class StockFilterConfig(BaseModel):
    """
    StockFilterConfig holds the zero-shot stock news filter settings

    * enabled: False to keep every item
    * labels: Candidate labels
    * stock_label: Label marking stock news, one of labels
    * hypothesis_template: Hypothesis with one {} placeholder
    * threshold: Minimum stock label score to drop an item
    """

    enabled: bool = True
    labels: List[str] = [
        "stock market report",
        "business relationship news",
    ]
    stock_label: str = "stock market report"
    hypothesis_template: str = "This headline is a {}."
    threshold: float = Field(default=0.5, ge=0.0, le=1.0)

    @model_validator(mode="after")
    def check_stock_label(self):
        """
        Checks the stock label is a candidate
        """
        if self.stock_label not in self.labels:
            raise ValueError(
                f"stock_label '{self.stock_label}' is not in labels"
            )
        return self


class FetchConfig(BackendConfig):
    """
    FetchConfig holds the generic news endpoint used by fetch_corpus

    * params: Query parameters sent with the request
    """

    model_id: str = "news"
    params: Dict[str, str] = {}


class IngestionConfig(BaseModel):
    """
    IngestionConfig holds the corpus ingestion settings

    * on_error: fail or skip malformed lines
    * premise: Text fed to the stock filter and the recognizer
    * stock_filter: Stock news filter settings
    * fetch: Generic news endpoint settings
    """

    on_error: ErrorPolicy = ErrorPolicy.FAIL
    premise: PremiseSource = PremiseSource.HEADLINE
    stock_filter: StockFilterConfig = Field(default_factory=StockFilterConfig)
    fetch: FetchConfig = Field(default_factory=FetchConfig)

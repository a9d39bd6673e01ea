"""
network_config centralizes all the configuration loading for network
construction and analysis
"""

import datetime
from typing import List, Optional

from pydantic import BaseModel, Field

from signet.core.types import Method, Weighting
from signet.core.utils import UtcDatetime
from signet.network.models import Duration


class NetworkConfig(BaseModel):
    """
    NetworkConfig holds snapshot, diff and balance settings

    * window: Snapshot window length
    * stride: Distance between window starts
    * tau: Smallest weight magnitude counted as signed, shared by diffs
      and balance analytics
    * weighting: confidence or sign aggregation
    * include_isolated: Keep entities without a weighted edge as nodes
    * event_date: Split date for before/after snapshots and their diff
    * methods: Observation methods aggregated into the network
    """

    window: Duration = datetime.timedelta(days=30)
    stride: Duration = datetime.timedelta(days=30)
    tau: float = Field(default=0.1, ge=0.0, le=1.0)
    weighting: Weighting = Weighting.CONFIDENCE
    include_isolated: bool = False
    event_date: Optional[UtcDatetime] = None
    methods: List[Method] = Field(
        default_factory=lambda: [Method.ZSC, Method.LLM], min_length=1
    )

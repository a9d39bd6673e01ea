"""
report provides the run report filled by the pipeline stages
"""

import contextlib
import threading
import time
from typing import Dict, List, Optional, Tuple

from humanfriendly import format_timespan
from pydantic import BaseModel, Field, PrivateAttr

from signet.core.errors import CorpusParseError, PipelineError
from signet.core.logging import logging
from signet.core.utils import canonical_json


class ItemError(BaseModel):
    """
    ItemError records a per-item failure skipped by the error policy
    """

    stage: str
    doc_id: Optional[str] = None
    pair: Optional[Tuple[str, str]] = None
    line: Optional[int] = None
    error: str
    message: str


class StageCounts(BaseModel):
    """
    StageCounts holds the items entering and leaving a stage
    """

    items_in: int = 0
    items_out: int = 0


class RunReport(BaseModel):
    """
    RunReport holds counts per stage, skipped item errors, the
    configuration digest and, outside the serialized form, wall-clock
    time per stage
    """

    config_digest: str = ""
    stages: Dict[str, StageCounts] = {}
    errors: List[ItemError] = []
    timings: Dict[str, float] = Field(default_factory=dict, exclude=True)
    _lock: threading.Lock = PrivateAttr(default_factory=threading.Lock)

    def record_stage(self, stage: str, items_in: int, items_out: int):
        """
        Record the counts of a stage

        :param stage: Stage name
        :param items_in: Items entering the stage
        :param items_out: Items produced by the stage
        """
        with self._lock:
            self.stages[stage] = StageCounts(
                items_in=items_in, items_out=items_out
            )

    def record_error(self, error: PipelineError | CorpusParseError):
        """
        Record a skipped failure

        :param error: Pipeline or corpus error
        """
        if isinstance(error, CorpusParseError):
            item_error = ItemError(
                stage="ingest",
                line=error.line,
                error=type(error).__name__,
                message=str(error),
            )
        else:
            item_error = ItemError(
                stage=error.stage,
                doc_id=error.doc_id,
                pair=error.pair,
                error=type(error.cause).__name__,
                message=str(error.cause),
            )

        with self._lock:
            self.errors.append(item_error)

    @contextlib.contextmanager
    def timed(self, stage: str):
        """
        Measure the wall-clock time of a stage

        :param stage: Stage name
        """
        start = time.monotonic()
        try:
            yield
        finally:
            elapsed = time.monotonic() - start
            with self._lock:
                self.timings[stage] = self.timings.get(stage, 0.0) + elapsed
            logging.info("Stage '%s' took %s", stage, format_timespan(elapsed))

    @property
    def partial(self) -> bool:
        """
        Property that is True when items were skipped
        """
        return bool(self.errors)

    def to_json(self) -> str:
        """
        Serialize the report canonically, without timings

        :return: Canonical JSON
        """
        return canonical_json(self.model_dump(mode="json"))

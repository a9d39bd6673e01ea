"""
models declares LLM pair explanations, their summaries and parser
diagnostics
"""

from typing import Optional, Tuple

from pydantic import BaseModel, ConfigDict, model_validator

from signet.core.types import RelationLabel
from signet.core.utils import UtcDatetime
from signet.relations.models import EntityPair


class PairExplanation(BaseModel):
    """
    PairExplanation is the sign and rationale an LLM gave for one pair
    in one document
    """

    model_config = ConfigDict(frozen=True)

    pair: EntityPair
    label: RelationLabel
    rationale: str
    doc_id: str
    published_at: Optional[UtcDatetime] = None
    display_names: Tuple[str, str]
    unresolved: bool = False

    @model_validator(mode="after")
    def check_rationale(self):
        """
        Checks signed labels come with a rationale
        """
        if self.label != RelationLabel.UNKNOWN and not self.rationale.strip():
            raise ValueError(f"{self.label} explanation without rationale")
        return self


class ExplanationSummary(BaseModel):
    """
    ExplanationSummary aggregates the rationales of a pair across
    documents
    """

    model_config = ConfigDict(frozen=True)

    pair: EntityPair
    summary: str
    observation_count: int
    doc_ids: Tuple[str, ...]

    @model_validator(mode="after")
    def check_count(self):
        """
        Checks the count matches the distinct documents
        """
        if self.observation_count < 1:
            raise ValueError("a summary needs at least one observation")
        if self.observation_count != len(set(self.doc_ids)):
            raise ValueError("observation_count must match doc_ids")
        return self


class ParseDiagnostic(BaseModel):
    """
    ParseDiagnostic records a completion segment the parser skipped
    """

    model_config = ConfigDict(frozen=True)

    doc_id: str
    line: int
    text: str
    reason: str

    def __str__(self):
        return f"{self.doc_id}:{self.line}: {self.reason}: {self.text!r}"

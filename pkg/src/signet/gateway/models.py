"""
models declares the request and result DTOs exchanged with the remote
model capabilities
"""

from typing import List, Tuple

from pydantic import BaseModel, ConfigDict, Field, model_validator

SINGLE_LABEL_TOLERANCE = 1e-6


class MentionResult(BaseModel):
    """
    MentionResult is one entity mention found by a recognizer, with a
    half-open character span into the source text
    """

    model_config = ConfigDict(frozen=True)

    surface: str
    start: int = Field(ge=0)
    end: int
    label: str
    score: float = Field(ge=0.0, le=1.0)

    @model_validator(mode="after")
    def check_span(self):
        """
        Checks the span is non-empty
        """
        if self.end <= self.start:
            raise ValueError(f"empty span [{self.start}, {self.end})")
        return self

    @property
    def span(self) -> Tuple[int, int]:
        """
        Property that holds the half-open span
        """
        return self.start, self.end


class ZscResult(BaseModel):
    """
    ZscResult holds candidate labels ordered by descending score, ties
    broken by label
    """

    model_config = ConfigDict(frozen=True)

    labels: List[str]
    scores: List[float]

    @model_validator(mode="after")
    def check_scores(self):
        """
        Checks labels and scores are parallel and ordered
        """
        if not self.labels or len(self.labels) != len(self.scores):
            raise ValueError("labels and scores must be parallel, non-empty")
        if any(score < 0.0 or score > 1.0 for score in self.scores):
            raise ValueError("scores must be in [0, 1]")
        if any(a < b for a, b in zip(self.scores, self.scores[1:])):
            raise ValueError("scores must be non-increasing")
        return self

    @property
    def top_label(self) -> str:
        """
        Property that holds the best label
        """
        return self.labels[0]

    @property
    def top_score(self) -> float:
        """
        Property that holds the best score
        """
        return self.scores[0]


class ChatMessage(BaseModel):
    """
    ChatMessage is one message of an LLM prompt
    """

    model_config = ConfigDict(frozen=True)

    role: str
    content: str


class LlmResult(BaseModel):
    """
    LlmResult holds a completion and the model that produced it
    """

    model_config = ConfigDict(frozen=True)

    text: str
    model_id: str

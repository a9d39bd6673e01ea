"""
explanation_config holds the configuration classes for the LLM
explanation pipeline
"""

from typing import List, Literal

from pydantic import BaseModel, Field

from signet.core.types import FOUR_CLASSES, THREE_CLASSES, RelationLabel


class ScorePolicy(BaseModel):
    """
    ScorePolicy sets the confidence given to LLM observations, which
    carry no calibrated score

    * positive, negative, neutral: Score of signed labels
    * unknown: Score of unknown labels
    """

    positive: float = Field(default=1.0, ge=0.0, le=1.0)
    negative: float = Field(default=1.0, ge=0.0, le=1.0)
    neutral: float = Field(default=1.0, ge=0.0, le=1.0)
    unknown: float = Field(default=0.0, ge=0.0, le=1.0)

    def score(self, label: RelationLabel) -> float:
        """
        Get the score of a label

        :param label: Relation label
        :return: Policy score
        """
        return getattr(self, label.value)


class ExplanationConfig(BaseModel):
    """
    ExplanationConfig holds the LLM pipeline settings

    * enabled: False to skip the LLM pipeline
    * classes: Classes offered to the model, 3 or 4
    * summaries: True to summarize every pair across documents
    * score_policy: Scores of LLM observations
    """

    enabled: bool = True
    classes: Literal[3, 4] = 4
    summaries: bool = False
    score_policy: ScorePolicy = Field(default_factory=ScorePolicy)

    @property
    def class_labels(self) -> List[RelationLabel]:
        """
        Property that holds the classes offered to the model
        """
        return list(THREE_CLASSES if self.classes == 3 else FOUR_CLASSES)

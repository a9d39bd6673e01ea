"""
relations_config centralizes all the configuration loading for relation
extraction
"""

from typing import List, Literal

from pydantic import BaseModel, Field

from signet.core.types import (
    FOUR_CLASSES,
    THREE_CLASSES,
    PairScope,
    RelationLabel,
)

DEFAULT_TEMPLATE = "the relationship between {A} and {B} is {CLASS}."
DEFAULT_CONTEXT_TEMPLATE = "This headline is about {}."
DEFAULT_TOPICS = [
    "privacy",
    "advertising",
    "hardware",
    "cloud",
    "social media",
    "legal",
    "acquisition",
    "partnership",
]


class ContextConfig(BaseModel):
    """
    ContextConfig holds the topic tagging settings

    * enabled: True to tag observations with a topic
    * labels: Candidate topics
    * hypothesis_template: Hypothesis with one {} placeholder
    """

    enabled: bool = False
    labels: List[str] = Field(default=DEFAULT_TOPICS, min_length=1)
    hypothesis_template: str = DEFAULT_CONTEXT_TEMPLATE


class RelationConfig(BaseModel):
    """
    RelationConfig holds relation extraction settings

    * classes: 3 for positive/negative/neutral, 4 to add unknown
    * hypothesis_template: Template with {A}, {B} and {CLASS}
    * pair_scope: all pairs, or focal pairs touching an item ticker
    * multi_label: Score classes independently
    * context: Topic tagging settings
    """

    classes: Literal[3, 4] = 3
    hypothesis_template: str = DEFAULT_TEMPLATE
    pair_scope: PairScope = PairScope.ALL
    multi_label: bool = False
    context: ContextConfig = Field(default_factory=ContextConfig)

    @property
    def class_labels(self) -> List[RelationLabel]:
        """
        Property that holds the candidate classes in declaration order
        """
        return list(THREE_CLASSES if self.classes == 3 else FOUR_CLASSES)

"""
models declares entity pairs, hypothesis templates and relation
observations
"""

import re
from typing import Optional, Tuple

from pydantic import (
    BaseModel,
    ConfigDict,
    Field,
    field_validator,
    model_validator,
)

from signet.core.types import Method, RelationLabel
from signet.core.utils import UtcDatetime, sha256
from signet.relations.relations_config import DEFAULT_TEMPLATE

OBSERVATION_ID_LENGTH = 16
PLACEHOLDERS = ("{A}", "{B}", "{CLASS}")


class EntityPair(BaseModel):
    """
    EntityPair is an unordered pair of entity ids stored with a < b.
    Use EntityPair.of to build one from ids in any order
    """

    model_config = ConfigDict(frozen=True)

    a: str
    b: str

    @model_validator(mode="after")
    def check_order(self):
        """
        Checks the canonical ordering
        """
        if self.a >= self.b:
            raise ValueError(
                f"pair ({self.a}, {self.b}) is not in canonical order"
            )
        return self

    @classmethod
    def of(cls, first: str, second: str) -> "EntityPair":
        """
        Builds the canonical pair of two distinct ids

        :param first: An entity id
        :param second: Another entity id
        :return: Canonical pair
        """
        if first == second:
            raise ValueError(f"pair of '{first}' with itself")
        a, b = sorted((first, second))
        return cls(a=a, b=b)

    @classmethod
    def parse(cls, value: str) -> "EntityPair":
        """
        Parses "a,b"

        :param value: Pair text
        :return: Canonical pair
        """
        parts = [part.strip() for part in value.split(",")]
        if len(parts) != 2 or not all(parts):
            raise ValueError(f"'{value}' is not a pair of ids")
        return cls.of(*parts)

    @property
    def key(self) -> Tuple[str, str]:
        """
        Property that holds the pair as a sortable tuple
        """
        return self.a, self.b

    def __contains__(self, entity_id: str) -> bool:
        return entity_id in (self.a, self.b)

    def other(self, entity_id: str) -> str:
        """
        Get the other endpoint

        :param entity_id: One endpoint
        :return: The other endpoint
        """
        return self.b if entity_id == self.a else self.a

    def __str__(self):
        return f"{self.a},{self.b}"


def _escape_braces(text: str) -> str:
    return text.replace("{", "{{").replace("}", "}}")


class HypothesisTemplate(BaseModel):
    """
    HypothesisTemplate holds a relation hypothesis with {A}, {B} and
    {CLASS} placeholders, each present exactly once
    """

    model_config = ConfigDict(frozen=True)

    text: str = DEFAULT_TEMPLATE

    @field_validator("text")
    @classmethod
    def check_placeholders(cls, text: str) -> str:
        """
        Checks every placeholder appears once
        """
        for placeholder in PLACEHOLDERS:
            if text.count(placeholder) != 1:
                raise ValueError(
                    f"template must contain {placeholder} exactly once"
                )
        return text

    def instantiate(self, name_a: str, name_b: str) -> str:
        """
        Fills the entity names, leaving the class as the zero-shot {}
        placeholder. Any other brace is escaped

        :param name_a: Display name of the first entity
        :param name_b: Display name of the second entity
        :return: Zero-shot hypothesis template
        """
        values = {
            "{A}": _escape_braces(name_a),
            "{B}": _escape_braces(name_b),
            "{CLASS}": "{}",
        }
        parts = re.split(r"(\{A\}|\{B\}|\{CLASS\})", self.text)
        return "".join(
            values.get(part, _escape_braces(part)) for part in parts
        )


class ContextTag(BaseModel):
    """
    ContextTag is the topic a headline is about
    """

    model_config = ConfigDict(frozen=True)

    label: str
    score: float = Field(ge=0.0, le=1.0)


def observation_id(doc_id: str, pair: EntityPair, method: Method) -> str:
    """
    Computes the id of an observation

    :param doc_id: News item id
    :param pair: Entity pair
    :param method: Producing pipeline
    :return: Observation id
    """
    return sha256(
        f"{doc_id}|{pair.a}|{pair.b}|{method}", OBSERVATION_ID_LENGTH
    )


class RelationObservation(BaseModel):
    """
    RelationObservation is one signed judgment about a pair in one
    document. Display names follow the pair order
    """

    model_config = ConfigDict(frozen=True)

    id: str = ""
    pair: EntityPair
    label: RelationLabel
    score: float = Field(ge=0.0, le=1.0)
    doc_id: str
    published_at: UtcDatetime
    context: Optional[ContextTag] = None
    method: Method
    display_names: Tuple[str, str]
    unresolved: bool = False

    @model_validator(mode="after")
    def derive_id(self):
        """
        Derives the id from document, pair and method
        """
        if not self.id:
            object.__setattr__(
                self,
                "id",
                observation_id(self.doc_id, self.pair, self.method),
            )
        return self

    def relabel(self, label: RelationLabel) -> "RelationObservation":
        """
        Get a copy with another label

        :param label: New label
        :return: Relabelled observation
        """
        return self.model_copy(update={"label": label})

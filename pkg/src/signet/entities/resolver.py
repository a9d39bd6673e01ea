"""
resolver normalizes organization surfaces and resolves mentions against
an alias table by exact lookup
"""

import unicodedata
from typing import TYPE_CHECKING, Union

from pydantic import BaseModel, ConfigDict

from signet.core.utils import collapse_whitespace, slugify
from signet.gateway.models import MentionResult

if TYPE_CHECKING:
    from signet.entities.alias_table import AliasTable

CORPORATE_SUFFIXES = ("inc", "inc.", "corp", "corp.", "ltd", "llc", "co.")
# alias table ids never hold a colon
UNRESOLVED_PREFIX = "unresolved:"


def _strip_punctuation(value: str) -> str:
    start, end = 0, len(value)
    while start < end and unicodedata.category(value[start]).startswith("P"):
        start += 1
    while end > start and unicodedata.category(value[end - 1]).startswith(
        "P"
    ):
        end -= 1
    return value[start:end].strip()


def _normalize_once(value: str) -> str:
    value = collapse_whitespace(value.casefold())
    tokens = value.split(" ")
    if len(tokens) > 1 and tokens[-1] in CORPORATE_SUFFIXES:
        value = " ".join(tokens[:-1])
    return _strip_punctuation(value)


def normalize_surface(surface: str) -> str:
    """
    Normalizes an organization surface: casefolded, internal whitespace
    collapsed, leading and trailing punctuation stripped and corporate
    suffixes removed from the tail. Rules are applied until nothing
    changes, so the function is idempotent

    :param surface: Surface text
    :return: Normalized surface
    """
    value = surface
    while True:
        normalized = _normalize_once(value)
        if normalized == value:
            return normalized
        value = normalized


class Unresolved(BaseModel):
    """
    Unresolved marks a mention missing from the alias table. It carries
    the normalized surface and keys the mention by its prefixed slug
    """

    model_config = ConfigDict(frozen=True)

    surface: str

    @property
    def id(self) -> str:
        """
        Property that holds the prefixed slug used as a node id
        """
        return f"{UNRESOLVED_PREFIX}{slugify(self.surface)}"

    def __str__(self):
        return f"Unresolved({self.surface})"


class ResolvedMention(BaseModel):
    """
    ResolvedMention pairs a mention with its canonical entity id or the
    Unresolved sentinel
    """

    model_config = ConfigDict(frozen=True)

    mention: MentionResult
    entity: Union[str, Unresolved]

    @property
    def resolved(self) -> bool:
        """
        Property that is True when the mention is in the alias table
        """
        return isinstance(self.entity, str)

    @property
    def entity_id(self) -> str:
        """
        Property that holds the canonical id, or the unresolved slug
        """
        return self.entity if self.resolved else self.entity.id


def resolve_surface(
    surface: str, table: "AliasTable"
) -> Union[str, Unresolved]:
    """
    Resolves a surface by exact lookup of its normalized form

    :param surface: Surface text
    :param table: Alias table
    :return: Canonical id, or Unresolved carrying the normalized surface
    """
    normalized = normalize_surface(surface)
    entity_id = table.lookup(normalized)
    if entity_id is None:
        return Unresolved(surface=normalized)
    return entity_id


def resolve(mention: MentionResult, table: "AliasTable") -> ResolvedMention:
    """
    Resolves a mention. A miss is never guessed

    :param mention: Recognized mention
    :param table: Alias table
    :return: Resolved mention
    """
    return ResolvedMention(
        mention=mention, entity=resolve_surface(mention.surface, table)
    )

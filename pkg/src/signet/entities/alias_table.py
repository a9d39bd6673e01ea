"""
alias_table provides the canonical entity model and the alias table
that merges different names of one organization into a single entity
"""

import json
import os
from collections import defaultdict
from typing import Dict, Iterable, List, Optional, Set, Tuple

from pydantic import BaseModel, ConfigDict, Field, model_validator

from signet.core.errors import ConfigError
from signet.core.logging import logging
from signet.entities.resolver import normalize_surface

DEFAULT_ALIAS_TABLE = os.path.join(
    os.path.dirname(os.path.realpath(__file__)),
    "..",
    "resources",
    "aliases",
    "default.json",
)


class CanonicalEntity(BaseModel):
    """
    CanonicalEntity is one disambiguated organization. The display name
    is always one of its aliases
    """

    model_config = ConfigDict(frozen=True)

    id: str = Field(pattern=r"^[a-z0-9-]+$")
    display_name: str
    aliases: Tuple[str, ...] = ()
    ticker: Optional[str] = None

    @model_validator(mode="after")
    def include_display_name(self):
        """
        Adds the display name to the aliases when missing
        """
        normalized = {normalize_surface(alias) for alias in self.aliases}
        if normalize_surface(self.display_name) not in normalized:
            object.__setattr__(
                self, "aliases", (self.display_name, *self.aliases)
            )
        return self

    @property
    def normalized_aliases(self) -> Set[str]:
        """
        Property that holds the normalized aliases
        """
        return {normalize_surface(alias) for alias in self.aliases}


class AliasConflict(BaseModel):
    """
    AliasConflict reports a normalized alias claimed by several entities
    """

    model_config = ConfigDict(frozen=True)

    alias: str
    entity_ids: Tuple[str, ...]

    def __str__(self):
        return f"alias '{self.alias}' claimed by {', '.join(self.entity_ids)}"


class AliasTable:
    """
    AliasTable indexes canonical entities by normalized alias. It is
    immutable once built and safe to share across threads. On conflicts
    the first claimant keeps the alias; validate_alias_table reports them
    """

    entities: Tuple[CanonicalEntity, ...]
    index: Dict[str, str]

    def __init__(self, entities: Iterable[CanonicalEntity] = ()):
        self.entities = tuple(entities)
        self.index = {}
        self._by_id = {}
        self._by_ticker = {}
        for entity in self.entities:
            self._by_id.setdefault(entity.id, entity)
            if entity.ticker:
                self._by_ticker.setdefault(entity.ticker.upper(), entity.id)
            for alias in sorted(entity.normalized_aliases):
                self.index.setdefault(alias, entity.id)

    def __len__(self) -> int:
        return len(self.entities)

    def __contains__(self, entity_id: str) -> bool:
        return entity_id in self._by_id

    def lookup(self, normalized: str) -> Optional[str]:
        """
        Looks up a normalized surface

        :param normalized: Normalized surface
        :return: Entity id, None on a miss
        """
        return self.index.get(normalized)

    def get(self, entity_id: str) -> Optional[CanonicalEntity]:
        """
        Get an entity by id

        :param entity_id: Entity id
        :return: The entity, None if absent
        """
        return self._by_id.get(entity_id)

    def ticker_entity(self, ticker: str) -> Optional[str]:
        """
        Get the entity listed under a ticker

        :param ticker: Ticker symbol
        :return: Entity id, None if absent
        """
        return self._by_ticker.get(ticker.upper())

    @classmethod
    def from_records(cls, records: List[dict]) -> "AliasTable":
        """
        Builds a table from alias table records

        :param records: Records as found in alias table files
        :return: Alias table
        """
        return cls(CanonicalEntity(**record) for record in records)

    @classmethod
    def load(cls, path: Optional[str] = None) -> "AliasTable":
        """
        Loads and validates an alias table file

        :param path: Alias table path, the packaged table when None
        :return: Validated alias table
        :raises ConfigError: If the file is invalid or has conflicts
        """
        path = path or DEFAULT_ALIAS_TABLE
        try:
            with open(path, encoding="utf-8") as table_file:
                records = json.load(table_file)
            if not isinstance(records, list):
                raise ValueError("expected a JSON array")
            table = cls.from_records(records)
        except OSError as exc:
            raise ConfigError("alias_table", str(exc)) from exc
        except (ValueError, TypeError) as exc:
            raise ConfigError("alias_table", f"{path}: {exc}") from exc

        conflicts = validate_alias_table(table)
        if conflicts:
            raise ConfigError(
                "alias_table",
                "; ".join(str(conflict) for conflict in conflicts),
            )

        logging.info("Loaded %s entities from '%s'", len(table), path)
        return table


def validate_alias_table(table: AliasTable) -> List[AliasConflict]:
    """
    Finds normalized aliases claimed by more than one entity, and
    entity ids declared more than once

    :param table: Table to validate
    :return: Conflicts ordered by alias, empty when the table is valid
    """
    claimants: Dict[str, Set[str]] = defaultdict(set)
    declared: Dict[str, int] = defaultdict(int)
    for entity in table.entities:
        declared[entity.id] += 1
        for alias in entity.normalized_aliases:
            claimants[alias].add(entity.id)

    conflicts = [
        AliasConflict(alias=alias, entity_ids=tuple(sorted(ids)))
        for alias, ids in sorted(claimants.items())
        if len(ids) > 1
    ]
    conflicts.extend(
        AliasConflict(alias=f"id:{entity_id}", entity_ids=(entity_id,) * n)
        for entity_id, n in sorted(declared.items())
        if n > 1
    )
    return conflicts

"""
entities_config holds the configuration class for entity resolution
"""

from typing import Optional

from pydantic import BaseModel


class EntityConfig(BaseModel):
    """
    EntityConfig holds entity resolution settings

    * alias_table: Alias table path, the packaged table when unset
    * include_unresolved: False to drop mentions missing from the table
    """

    alias_table: Optional[str] = None
    include_unresolved: bool = True

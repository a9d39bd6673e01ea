"""
config provides a singleton configuration loader for the pydantic
configuration classes of the signet components
"""

import io
import os
from collections import defaultdict
from typing import Any, Dict, TypeVar

import yaml
from pydantic import BaseModel

from signet.core.logging import logging
from signet.core.utils import Singleton

T = TypeVar("T", bound=BaseModel)

DEFAULT_CONFIG_PATH = "signet.yml"


def deep_merge(base: Dict[str, Any], override: Dict[str, Any]) -> dict:
    """
    Merges override into a copy of base, recursing into mappings

    :param base: Base mapping
    :param override: Values that win over base
    :return: Merged mapping
    """
    merged = dict(base)
    for key, value in override.items():
        if isinstance(value, dict) and isinstance(merged.get(key), dict):
            merged[key] = deep_merge(merged[key], value)
        else:
            merged[key] = value

    return merged


class ConfigLoader(metaclass=Singleton):
    """
    ConfigLoader is a singleton class responsible for loading
    configurations only once
    """

    configs: dict

    def __init__(self):
        super().__init__()
        self.configs = defaultdict()

    def read(self, config: str | dict | io.IOBase | None = None) -> dict:
        """
        Reads raw configuration data from a path, stream or dict. When no
        source is given, SIGNET_CONFIG (or ./signet.yml) is used and a
        missing file yields an empty configuration

        :param config: Config data or source
        :return: Configuration data
        """
        if isinstance(config, dict):
            return config

        if isinstance(config, io.IOBase):
            config_data = yaml.safe_load(config)
            if config_data is None:
                raise ValueError("Unable to load a valid configuration")
            return config_data

        config_path = config or os.environ.get(
            "SIGNET_CONFIG", DEFAULT_CONFIG_PATH
        )
        if config is None and not os.path.exists(config_path):
            logging.debug("No configuration file at %s", config_path)
            return {}

        logging.info("Loading configuration from %s", config_path)
        with open(config_path, encoding="utf-8") as cf:
            config_data = yaml.safe_load(cf)

        if config_data is None:
            raise ValueError("Unable to load a valid configuration")

        logging.debug(f"Loaded config data: {config_data}")
        return config_data

    def load(self, clazz: T, config: str | dict | io.IOBase = None) -> T:
        """
        Loads a configuration and stores it in a "singleton"
        list.

        :param clazz: Class of the configuration
        :param config: Config data or source.
        """
        if clazz in self.configs:
            return self.configs[clazz]

        self.configs[clazz] = clazz(**self.read(config))
        return self.configs[clazz]

    def dispose(self, clazz: type) -> None:
        """
        Removes the loaded class from the "singleton" instances

        :param clazz: Class of the configuration
        """
        if clazz in self.configs:
            del self.configs[clazz]

"""
jsonl reads and writes line-delimited JSON files of pydantic models in
the canonical serialization
"""

import json
from typing import Iterable, List, Type, TypeVar

from pydantic import BaseModel, ValidationError

from signet.core.utils import canonical_json

M = TypeVar("M", bound=BaseModel)


def dumps_model(model: BaseModel) -> str:
    """
    Serializes a model canonically

    :param model: Model to serialize
    :return: Canonical JSON text
    """
    return canonical_json(model.model_dump(mode="json"))


def write_jsonl(path: str, models: Iterable[BaseModel]) -> int:
    """
    Writes models one per line

    :param path: Output path
    :param models: Models to write, in order
    :return: Number of lines written
    """
    count = 0
    with open(path, "w", encoding="utf-8") as jsonl_file:
        for model in models:
            jsonl_file.write(dumps_model(model) + "\n")
            count += 1
    return count


def read_jsonl(path: str, clazz: Type[M]) -> List[M]:
    """
    Reads models written by write_jsonl

    :param path: Input path
    :param clazz: Model class
    :return: Models, in file order
    :raises ValueError: If a line is invalid, naming the line
    """
    models = []
    with open(path, encoding="utf-8") as jsonl_file:
        for line_number, line in enumerate(jsonl_file, start=1):
            if not line.strip():
                continue
            try:
                models.append(clazz(**json.loads(line)))
            except (ValueError, TypeError, ValidationError) as exc:
                raise ValueError(f"{path}:{line_number}: {exc}") from exc
    return models

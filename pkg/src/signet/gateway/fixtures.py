"""
fixtures implements the record/replay fixture store. Requests are keyed
by a canonical digest so semantically identical requests share a
recorded response
"""

import base64
import json
import os
import threading
from typing import Any, Dict, Optional

from filelock import FileLock
from pydantic import BaseModel

from signet.core.logging import logging
from signet.core.utils import canonical_json, collapse_whitespace, sha256


def _normalize(value: Any) -> Any:
    if isinstance(value, BaseModel):
        return _normalize(value.model_dump(mode="json"))

    if isinstance(value, dict):
        return {str(k): _normalize(v) for k, v in value.items()}

    if isinstance(value, (list, tuple)):
        return [_normalize(v) for v in value]

    if isinstance(value, str):
        return collapse_whitespace(value)

    return value


def canonical_request(request: Any) -> str:
    """
    Serializes a gateway request canonically: sorted keys, no
    insignificant whitespace and whitespace runs inside strings collapsed

    :param request: Request as a dict or pydantic model
    :return: Canonical text
    """
    return canonical_json(_normalize(request))


def canonical_digest(request: Any) -> str:
    """
    Computes the digest identifying a gateway request

    :param request: Request as a dict or pydantic model
    :return: Hex sha256 of the canonical serialization
    """
    return sha256(canonical_request(request))


class ReplayFixture:
    """
    ReplayFixture maps request digests to recorded response bytes. The
    backing file holds one {"digest", "response"} object per line with the
    response base64 encoded. Lookups read an in-memory map; appends go
    through a single writer guarded by a thread lock and a file lock
    """

    path: str
    entries: Dict[str, bytes]

    def __init__(self, path: str):
        self.path = path
        self.entries = {}
        self._write_lock = threading.Lock()
        self._file_lock = FileLock(f"{path}.lock", thread_local=False)
        self.load()

    def load(self) -> None:
        """
        Loads the fixture file, if present
        """
        if not os.path.exists(self.path):
            logging.info("Fixture '%s' does not exist yet", self.path)
            return

        with open(self.path, encoding="utf-8") as fixture_file:
            for line_number, line in enumerate(fixture_file, start=1):
                if not line.strip():
                    continue
                try:
                    record = json.loads(line)
                    self.entries[record["digest"]] = base64.b64decode(
                        record["response"]
                    )
                except (ValueError, KeyError) as exc:
                    raise ValueError(
                        f"{self.path}:{line_number}: invalid fixture entry:"
                        f" {exc}"
                    ) from exc

        logging.info(
            "Loaded %s fixture entries from '%s'",
            len(self.entries),
            self.path,
        )

    def __len__(self) -> int:
        return len(self.entries)

    def get(self, digest: str) -> Optional[bytes]:
        """
        Gets a recorded response

        :param digest: Request digest
        :return: Recorded response bytes, None if absent
        """
        return self.entries.get(digest)

    def append(self, digest: str, response: bytes) -> None:
        """
        Records a response. The file is only ever appended to and an
        already recorded digest is left untouched

        :param digest: Request digest
        :param response: Response bytes
        """
        with self._write_lock:
            if digest in self.entries:
                return

            directory = os.path.dirname(os.path.abspath(self.path))
            os.makedirs(directory, exist_ok=True)
            line = json.dumps(
                {
                    "digest": digest,
                    "response": base64.b64encode(response).decode("ascii"),
                },
                sort_keys=True,
            )
            with self._file_lock:
                with open(self.path, "a", encoding="utf-8") as fixture_file:
                    fixture_file.write(line + "\n")

            self.entries[digest] = response
            logging.debug("Recorded fixture entry %s", digest)

"""
fetcher downloads news from a generic HTTP endpoint into a corpus file
"""

import json
from typing import Any, Dict, Iterator, List, Optional

from signet.core.errors import ConfigError, CorpusParseError, ProtocolError
from signet.core.logging import logging
from signet.core.types import ErrorPolicy
from signet.gateway.transport import HttpTransport
from signet.ingestion.ingestion_config import FetchConfig
from signet.ingestion.news import Corpus, parse_record, write_corpus

FIELD_ALIASES = {
    "headline": ("headline", "title"),
    "summary": ("summary", "description"),
    "published_at": ("published_at", "publishedAt", "date"),
    "source": ("source",),
    "url": ("url", "link"),
    "tickers": ("tickers", "symbols"),
}


def _records(body: bytes) -> Iterator[Any]:
    text = body.decode("utf-8")
    try:
        data = json.loads(text)
    except ValueError:
        for line in text.splitlines():
            if line.strip():
                yield json.loads(line)
        return

    if isinstance(data, dict):
        data = data.get("articles", data.get("items", [data]))
    if not isinstance(data, list):
        raise ProtocolError("fetch", "expected a list of articles")
    yield from data


def to_input_record(raw: Any) -> Dict[str, Any]:
    """
    Maps a provider record to the corpus input schema

    :param raw: Provider record
    :return: Input record
    """
    if not isinstance(raw, dict):
        return raw

    record = {}
    for field, aliases in FIELD_ALIASES.items():
        value = next((raw[a] for a in aliases if a in raw), None)
        if field == "source" and isinstance(value, dict):
            value = value.get("name")
        if field == "tickers" and value is None:
            value = []
        if value is not None or field == "summary":
            record[field] = value
    return record


def fetch_corpus(
    out_path: str,
    config: FetchConfig,
    transport: Optional[HttpTransport] = None,
    on_error: ErrorPolicy = ErrorPolicy.SKIP,
    errors: Optional[List[CorpusParseError]] = None,
) -> Corpus:
    """
    Fetches news from config.endpoint and writes them as a corpus file.
    Responses can be a JSON array, an object holding "articles" or
    line-delimited JSON

    :param out_path: Corpus file written
    :param config: Endpoint settings
    :param transport: Transport to use, HTTP with retries when absent
    :param on_error: fail or skip unusable records
    :param errors: List receiving the skipped record errors
    :return: Fetched corpus
    """
    if not config.endpoint:
        raise ConfigError("ingestion.fetch.endpoint", "no endpoint to fetch")

    if transport is None:
        transport = HttpTransport(config, "fetch")

    try:
        body = transport.get(params=config.params or None)
        raws = list(_records(body))
    except (ValueError, UnicodeDecodeError) as exc:
        raise ProtocolError("fetch", str(exc)) from exc

    items = []
    for index, raw in enumerate(raws, start=1):
        line = json.dumps(to_input_record(raw))
        try:
            items.append(parse_record(index, line))
        except CorpusParseError as exc:
            if on_error == ErrorPolicy.FAIL:
                raise
            logging.warning("Skipping fetched record: %s", exc)
            if errors is not None:
                errors.append(exc)

    corpus = Corpus(items=items)
    write_corpus(corpus, out_path)
    logging.info(
        "Fetched %s item(s) from '%s' into '%s'",
        len(corpus),
        config.endpoint,
        out_path,
    )
    return corpus

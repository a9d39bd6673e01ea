"""
news provides the news item and corpus models, and the line-delimited
corpus reader and writer
"""

import json
from typing import Any, Dict, List, Optional, Tuple

from pydantic import (
    BaseModel,
    ConfigDict,
    ValidationError,
    field_validator,
    model_validator,
)

from signet.core.errors import CorpusParseError
from signet.core.logging import logging
from signet.core.types import ErrorPolicy, PremiseSource
from signet.core.utils import UtcDatetime, sha256

ITEM_ID_LENGTH = 16


def news_id(url: str, headline: str) -> str:
    """
    Computes the stable id of a news item

    :param url: Item url
    :param headline: Item headline
    :return: Content digest of url and headline
    """
    return sha256(f"{url}\n{headline.strip()}", ITEM_ID_LENGTH)


class NewsItem(BaseModel):
    """
    NewsItem is one ingested news record. The id is derived from the
    url and headline when not given
    """

    model_config = ConfigDict(frozen=True, extra="ignore")

    id: str
    headline: str
    summary: Optional[str] = None
    published_at: UtcDatetime
    source: str
    url: str
    tickers: Tuple[str, ...] = ()

    @model_validator(mode="before")
    @classmethod
    def derive_id(cls, data: Any) -> Any:
        """
        Derives the id from url and headline
        """
        if isinstance(data, dict) and "id" not in data:
            headline, url = data.get("headline"), data.get("url")
            if isinstance(headline, str) and isinstance(url, str):
                data = {**data, "id": news_id(url, headline)}
        return data

    @field_validator("headline")
    @classmethod
    def check_headline(cls, headline: str) -> str:
        """
        Checks the headline is not blank
        """
        if not headline.strip():
            raise ValueError("headline is empty")
        return headline

    def premise(self, source: PremiseSource = PremiseSource.HEADLINE) -> str:
        """
        Get the text fed to classifiers and recognizers

        :param source: headline or headline_summary
        :return: Premise text
        """
        if source == PremiseSource.HEADLINE_SUMMARY and self.summary:
            return f"{self.headline} {self.summary}"
        return self.headline

    def to_record(self) -> Dict[str, Any]:
        """
        Get the item in the corpus input schema

        :return: Input record
        """
        return self.model_dump(mode="json", exclude={"id"})


def _sort_key(item: NewsItem) -> tuple:
    return item.published_at, item.id


class Corpus(BaseModel):
    """
    Corpus holds news items deduplicated by id, first occurrence
    winning, and sorted by (published_at, id)
    """

    model_config = ConfigDict(frozen=True)

    items: Tuple[NewsItem, ...] = ()

    @field_validator("items")
    @classmethod
    def dedup_and_sort(cls, items: Tuple[NewsItem, ...]):
        """
        Deduplicates and sorts the items
        """
        unique: Dict[str, NewsItem] = {}
        for item in items:
            unique.setdefault(item.id, item)
        return tuple(sorted(unique.values(), key=_sort_key))

    def __len__(self) -> int:
        return len(self.items)

    def get(self, item_id: str) -> Optional[NewsItem]:
        """
        Get an item by id

        :param item_id: Item id
        :return: The item, None if absent
        """
        return next((i for i in self.items if i.id == item_id), None)


def parse_record(line_number: int, line: str) -> NewsItem:
    """
    Parses one corpus line

    :param line_number: Line number, for errors
    :param line: Line text
    :return: Parsed item
    :raises CorpusParseError: If the line is malformed
    """
    try:
        record = json.loads(line)
    except ValueError as exc:
        raise CorpusParseError(line_number, "record", str(exc)) from exc

    if not isinstance(record, dict):
        raise CorpusParseError(line_number, "record", "not a JSON object")

    record.pop("id", None)
    try:
        return NewsItem(**record)
    except ValidationError as exc:
        error = next(
            (e for e in exc.errors() if e["loc"] != ("id",)), exc.errors()[0]
        )
        field = ".".join(str(loc) for loc in error["loc"]) or "record"
        raise CorpusParseError(line_number, field, error["msg"]) from exc


def load_corpus(
    path: str,
    on_error: ErrorPolicy = ErrorPolicy.FAIL,
    errors: Optional[List[CorpusParseError]] = None,
) -> Corpus:
    """
    Loads a line-delimited corpus file

    :param path: Corpus path
    :param on_error: fail on the first malformed line, or skip it
    :param errors: List receiving the skipped line errors
    :return: Deduplicated and sorted corpus
    :raises OSError: If the file can't be read
    :raises CorpusParseError: If a line is malformed under fail
    """
    items = []
    skipped = 0
    with open(path, encoding="utf-8") as corpus_file:
        for line_number, line in enumerate(corpus_file, start=1):
            if not line.strip():
                continue
            try:
                items.append(parse_record(line_number, line))
            except CorpusParseError as exc:
                if on_error == ErrorPolicy.FAIL:
                    raise
                skipped += 1
                logging.warning("Skipping %s: %s", path, exc)
                if errors is not None:
                    errors.append(exc)

    corpus = Corpus(items=items)
    logging.info(
        "Loaded %s item(s) from '%s' (%s duplicate(s), %s skipped)",
        len(corpus),
        path,
        len(items) - len(corpus),
        skipped,
    )
    return corpus


def write_corpus(corpus: Corpus, path: str) -> None:
    """
    Writes a corpus in the input schema, one item per line

    :param corpus: Corpus to write
    :param path: Output path
    """
    with open(path, "w", encoding="utf-8") as corpus_file:
        for item in corpus.items:
            record = item.to_record()
            corpus_file.write(
                json.dumps(record, sort_keys=True, ensure_ascii=False) + "\n"
            )

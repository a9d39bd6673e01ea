"""
parser turns LLM completions into pair explanations. Lines in the
requested "REL: A | B | class | rationale" format are parsed strictly;
completions without such lines fall back to a prose parser for answers
of the form "A and B: ... appears to be negative ..."
"""

import re
from typing import Dict, List, Optional, Tuple, Union

from signet.core.logging import logging
from signet.core.types import FOUR_CLASSES, RelationLabel
from signet.entities.alias_table import AliasTable
from signet.entities.resolver import Unresolved, resolve_surface
from signet.explanation.models import PairExplanation, ParseDiagnostic
from signet.ingestion.news import NewsItem
from signet.relations.models import EntityPair

STRICT_LINE = re.compile(
    r"^\s*REL:\s*(?P<a>[^|]+?)\s*\|\s*(?P<b>[^|]+?)\s*\|"
    r"\s*(?P<label>[^|]+?)\s*\|\s*(?P<rationale>[^|]*?)\s*$",
    re.IGNORECASE,
)
STRICT_PREFIX = re.compile(r"^\s*REL:", re.IGNORECASE)
PROSE_LINE = re.compile(r"^\s*(?P<pair>[^:]+?)\s*:\s*(?P<rationale>.+?)\s*$")
PROSE_SIGN = re.compile(
    r"\b(?:appears to be|interpreted as|classified as|is)\s+"
    r"(?P<label>positive|negative|neutral|unknown)\b",
    re.IGNORECASE,
)
CONJUNCTION = " and "

Entity = Union[str, Unresolved]


class _Collector:
    """
    Collects explanations of one completion, keeping the first
    explanation of every pair
    """

    def __init__(
        self,
        item: NewsItem,
        diagnostics: Optional[List[ParseDiagnostic]],
    ):
        self.item = item
        self.diagnostics = diagnostics
        self.explanations: Dict[Tuple[str, str], PairExplanation] = {}

    def reject(self, line: int, text: str, reason: str) -> None:
        diagnostic = ParseDiagnostic(
            doc_id=self.item.id, line=line, text=text, reason=reason
        )
        logging.debug("Skipping completion segment %s", diagnostic)
        if self.diagnostics is not None:
            self.diagnostics.append(diagnostic)

    def add(
        self,
        line: int,
        text: str,
        first: Tuple[str, Entity],
        second: Tuple[str, Entity],
        label: RelationLabel,
        rationale: str,
    ) -> None:
        id_first, id_second = (
            entity if isinstance(entity, str) else entity.id
            for _, entity in (first, second)
        )
        if id_first == id_second:
            self.reject(line, text, "both names denote the same entity")
            return

        pair = EntityPair.of(id_first, id_second)
        if pair.key in self.explanations:
            self.reject(line, text, f"duplicate pair {pair}")
            return

        if label != RelationLabel.UNKNOWN and not rationale:
            self.reject(line, text, "missing rationale")
            return

        names = (first[0], second[0])
        if id_first != pair.a:
            names = (second[0], first[0])
        self.explanations[pair.key] = PairExplanation(
            pair=pair,
            label=label,
            rationale=rationale,
            doc_id=self.item.id,
            published_at=self.item.published_at,
            display_names=names,
            unresolved=not all(
                isinstance(entity, str) for _, entity in (first, second)
            ),
        )

    def result(self) -> List[PairExplanation]:
        return list(self.explanations.values())


def _parse_label(value: str) -> Optional[RelationLabel]:
    try:
        label = RelationLabel.from_string(value)
    except ValueError:
        return None
    return label if label in FOUR_CLASSES else None


def _split_pair(
    text: str, table: AliasTable
) -> Optional[Tuple[Tuple[str, Entity], Tuple[str, Entity]]]:
    """
    Splits "X and Y" at the conjunction that resolves best: both sides
    in the alias table first, then one side, then the first split
    """
    candidates = []
    start = text.find(CONJUNCTION)
    while start != -1:
        left = text[:start].strip()
        right = text[start + len(CONJUNCTION) :].strip()
        if left and right:
            first = (left, resolve_surface(left, table))
            second = (right, resolve_surface(right, table))
            resolved = sum(
                isinstance(entity, str) for _, entity in (first, second)
            )
            candidates.append((-resolved, len(candidates), first, second))
        start = text.find(CONJUNCTION, start + 1)

    if not candidates:
        return None
    _, _, first, second = min(candidates, key=lambda c: (c[0], c[1]))
    return first, second


def _parse_strict(
    lines: List[Tuple[int, str]], table: AliasTable, collector: _Collector
) -> None:
    for number, text in lines:
        match = STRICT_LINE.match(text)
        if match is None:
            if STRICT_PREFIX.match(text):
                collector.reject(number, text, "malformed REL line")
            continue

        label = _parse_label(match["label"])
        if label is None:
            collector.reject(number, text, f"unknown class {match['label']}")
            continue

        first, second = match["a"].strip(), match["b"].strip()
        collector.add(
            number,
            text,
            (first, resolve_surface(first, table)),
            (second, resolve_surface(second, table)),
            label,
            match["rationale"].strip(),
        )


def _parse_prose(
    lines: List[Tuple[int, str]], table: AliasTable, collector: _Collector
) -> None:
    for number, text in lines:
        match = PROSE_LINE.match(text)
        if match is None:
            collector.reject(number, text, "no 'A and B:' prefix")
            continue

        names = _split_pair(match["pair"], table)
        if names is None:
            collector.reject(number, text, "no pair of organizations")
            continue

        sign = PROSE_SIGN.search(match["rationale"])
        if sign is None:
            collector.reject(number, text, "no relationship sign")
            continue

        collector.add(
            number,
            text,
            names[0],
            names[1],
            RelationLabel.from_string(sign["label"]),
            match["rationale"],
        )


def parse_llm_relations(
    completion: str,
    item: NewsItem,
    table: AliasTable,
    diagnostics: Optional[List[ParseDiagnostic]] = None,
) -> List[PairExplanation]:
    """
    Parses a completion into explanations. Names are resolved through
    the alias table; names missing from it are kept as flagged
    unresolved entities. Skipped segments become diagnostics

    :param completion: Completion text
    :param item: News item the completion answers
    :param table: Alias table
    :param diagnostics: List receiving the skipped segments
    :return: Explanations in completion order
    """
    collector = _Collector(item, diagnostics)
    lines = [
        (number, text.strip())
        for number, text in enumerate(completion.splitlines(), start=1)
        if text.strip()
    ]

    if any(STRICT_LINE.match(text) for _, text in lines):
        _parse_strict(lines, table, collector)
    else:
        _parse_prose(lines, table, collector)

    explanations = collector.result()
    if not explanations:
        logging.warning(
            "No relationship could be parsed for %s: %r",
            item.id,
            completion,
        )
        collector.reject(0, completion, "unparseable completion")
    return explanations

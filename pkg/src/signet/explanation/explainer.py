"""
explainer runs the LLM pipeline: one relation prompt per news item,
parsed into pair explanations that feed the signed network, and
optional per pair summaries across documents
"""

from collections import defaultdict
from typing import Dict, Iterable, List, Optional, Tuple

from signet.core.errors import FATAL_ERRORS, PipelineError
from signet.core.logging import logging
from signet.core.report import RunReport
from signet.core.template_factory import TemplateFactory
from signet.core.types import ErrorPolicy, Method, RelationLabel
from signet.core.utils import EPOCH
from signet.core.worker_pool import WorkerPool
from signet.entities.alias_table import AliasTable
from signet.explanation.explanation_config import (
    ExplanationConfig,
    ScorePolicy,
)
from signet.explanation.models import (
    ExplanationSummary,
    PairExplanation,
    ParseDiagnostic,
)
from signet.explanation.parser import parse_llm_relations
from signet.explanation.prompts import (
    build_relation_prompt,
    build_summary_prompt,
)
from signet.gateway.backends import LlmBackend
from signet.ingestion.news import Corpus, NewsItem
from signet.relations.models import EntityPair, RelationObservation


def llm_observations(
    explanations: Iterable[PairExplanation],
    score_policy: Optional[ScorePolicy] = None,
    include_unresolved: bool = True,
) -> List[RelationObservation]:
    """
    Turns explanations into observations scored by the policy

    :param explanations: Pair explanations
    :param score_policy: Scores per label
    :param include_unresolved: False to drop unresolved pairs
    :return: One observation per explanation, method llm
    """
    score_policy = score_policy or ScorePolicy()
    return [
        RelationObservation(
            pair=explanation.pair,
            label=explanation.label,
            score=score_policy.score(explanation.label),
            doc_id=explanation.doc_id,
            published_at=explanation.published_at,
            method=Method.LLM,
            display_names=explanation.display_names,
            unresolved=explanation.unresolved,
        )
        for explanation in explanations
        if include_unresolved or not explanation.unresolved
    ]


def explain_item(
    item: NewsItem,
    table: AliasTable,
    llm: LlmBackend,
    config: Optional[ExplanationConfig] = None,
    include_summary: bool = False,
    diagnostics: Optional[List[ParseDiagnostic]] = None,
) -> List[PairExplanation]:
    """
    Prompts the LLM about one item and parses its answer

    :param item: News item
    :param table: Alias table
    :param llm: LLM backend
    :param config: Explanation settings
    :param include_summary: True to add the item summary to the prompt
    :param diagnostics: List receiving skipped completion segments
    :return: Explanations in completion order
    """
    config = config or ExplanationConfig()
    prompt = build_relation_prompt(
        item, config.class_labels, include_summary=include_summary
    )
    completion = llm.complete(prompt)
    return parse_llm_relations(completion.text, item, table, diagnostics)


def run_llm_pipeline(
    corpus: Corpus,
    table: AliasTable,
    llm: LlmBackend,
    config: Optional[ExplanationConfig] = None,
    include_summary: bool = False,
    pool: Optional[WorkerPool] = None,
    on_error: ErrorPolicy = ErrorPolicy.FAIL,
    report: Optional[RunReport] = None,
    diagnostics: Optional[List[ParseDiagnostic]] = None,
) -> List[PairExplanation]:
    """
    Explains every item of a corpus. Items are prompted concurrently and
    the explanations assembled in corpus order

    :param corpus: Filtered corpus
    :param table: Alias table
    :param llm: LLM backend
    :param config: Explanation settings
    :param include_summary: True to add item summaries to the prompts
    :param pool: Worker pool, sequential when absent
    :param on_error: fail on the first error, or skip failed items
    :param report: Report receiving counts and skipped errors
    :param diagnostics: List receiving skipped completion segments
    :return: Explanations
    """
    config = config or ExplanationConfig()
    pool = pool or WorkerPool(max_workers=1)

    def task(item: NewsItem) -> Tuple[list, list]:
        item_diagnostics: List[ParseDiagnostic] = []
        return (
            explain_item(
                item, table, llm, config, include_summary, item_diagnostics
            ),
            item_diagnostics,
        )

    outcomes = pool.map(task, corpus.items)
    explanations = []
    for item, outcome in zip(corpus.items, outcomes):
        if outcome.ok:
            item_explanations, item_diagnostics = outcome.result
            explanations.extend(item_explanations)
            if diagnostics is not None:
                diagnostics.extend(item_diagnostics)
            continue

        if isinstance(outcome.error, FATAL_ERRORS):
            raise outcome.error
        error = PipelineError("explain", item.id, outcome.error)
        if on_error == ErrorPolicy.FAIL:
            raise error from outcome.error
        logging.error("%s", error)
        if report is not None:
            report.record_error(error)

    if report is not None:
        report.record_stage("explain", len(corpus), len(explanations))
    logging.info(
        "Explained %s pair(s) from %s item(s)",
        len(explanations),
        len(corpus),
    )
    return explanations


def summarize_pair(
    pair: EntityPair,
    explanations: List[PairExplanation],
    llm: LlmBackend,
    factory: Optional[TemplateFactory] = None,
) -> ExplanationSummary:
    """
    Summarizes the rationales of a pair, oldest first

    :param pair: Entity pair
    :param explanations: Explanations of the pair
    :param llm: LLM backend
    :param factory: Template factory
    :return: Summary citing every document
    """
    if not explanations:
        raise ValueError(f"no explanation to summarize for {pair}")
    if any(explanation.pair != pair for explanation in explanations):
        raise ValueError(f"explanations must all be about {pair}")

    ordered = sorted(
        explanations,
        key=lambda e: (e.published_at or EPOCH, e.doc_id),
    )
    prompt = build_summary_prompt(
        ordered[0].display_names, ordered, factory=factory
    )
    completion = llm.complete(prompt)
    doc_ids = tuple(dict.fromkeys(e.doc_id for e in ordered))
    return ExplanationSummary(
        pair=pair,
        summary=completion.text.strip(),
        observation_count=len(doc_ids),
        doc_ids=doc_ids,
    )


def summarize_all(
    explanations: Iterable[PairExplanation],
    llm: LlmBackend,
    on_error: ErrorPolicy = ErrorPolicy.FAIL,
    report: Optional[RunReport] = None,
) -> List[ExplanationSummary]:
    """
    Summarizes every pair with at least one signed explanation, one pair
    at a time in pair order

    :param explanations: Explanations
    :param llm: LLM backend
    :param on_error: fail on the first error, or skip failed pairs
    :param report: Report receiving counts and skipped errors
    :return: Summaries in pair order
    """
    by_pair: Dict[EntityPair, List[PairExplanation]] = defaultdict(list)
    for explanation in explanations:
        by_pair[explanation.pair].append(explanation)

    factory = TemplateFactory()
    summaries = []
    for pair in sorted(by_pair, key=lambda p: p.key):
        pair_explanations = by_pair[pair]
        if all(e.label == RelationLabel.UNKNOWN for e in pair_explanations):
            continue
        try:
            summaries.append(
                summarize_pair(pair, pair_explanations, llm, factory)
            )
        except FATAL_ERRORS:
            raise
        except Exception as exc:  # pylint: disable=broad-exception-caught
            error = PipelineError(
                "summarize", pair_explanations[0].doc_id, exc, pair.key
            )
            if on_error == ErrorPolicy.FAIL:
                raise error from exc
            logging.error("%s", error)
            if report is not None:
                report.record_error(error)

    if report is not None:
        report.record_stage("summarize", len(by_pair), len(summaries))
    return summaries

"""
stock_filter drops stock market reports from a corpus with a zero-shot
classifier
"""

from typing import List, Optional, Tuple

from signet.core.errors import FATAL_ERRORS, PipelineError
from signet.core.logging import logging
from signet.core.types import PremiseSource
from signet.core.worker_pool import WorkerPool
from signet.gateway.backends import ZscBackend
from signet.ingestion.ingestion_config import StockFilterConfig
from signet.ingestion.news import Corpus, NewsItem

STAGE = "filter"


def is_stock_news(
    item: NewsItem,
    zsc: ZscBackend,
    config: StockFilterConfig,
    premise: PremiseSource = PremiseSource.HEADLINE,
) -> bool:
    """
    Classifies one item

    :param item: Item to classify
    :param zsc: Zero-shot backend
    :param config: Filter settings
    :param premise: Text classified
    :return: True when the stock label ranks first with a score at
    least the threshold
    """
    result = zsc.zsc(
        item.premise(premise), config.hypothesis_template, config.labels
    )
    return (
        result.top_label == config.stock_label
        and result.top_score >= config.threshold
    )


def filter_stock_news(
    corpus: Corpus,
    zsc: ZscBackend,
    threshold: Optional[float] = None,
    config: Optional[StockFilterConfig] = None,
    premise: PremiseSource = PremiseSource.HEADLINE,
    pool: Optional[WorkerPool] = None,
    errors: Optional[List[PipelineError]] = None,
) -> Tuple[Corpus, Corpus]:
    """
    Partitions a corpus into kept and dropped items. Items are
    classified concurrently and assembled in corpus order

    :param corpus: Corpus to filter
    :param zsc: Zero-shot backend
    :param threshold: Overrides the configured threshold
    :param config: Filter settings
    :param premise: Text classified
    :param pool: Worker pool, sequential when absent
    :param errors: When given, failed items are appended here instead
    of raising. Kept, dropped and failed items then cover the corpus
    :return: Kept and dropped corpora
    :raises PipelineError: If an item fails and errors is None
    :raises DeterminismError: If a replay fixture misses
    """
    config = config or StockFilterConfig()
    if threshold is not None:
        config = config.model_copy(update={"threshold": threshold})
    if not 0.0 <= config.threshold <= 1.0:
        raise ValueError(f"threshold {config.threshold} is not in [0, 1]")

    pool = pool or WorkerPool(max_workers=1)
    outcomes = pool.map(
        lambda item: is_stock_news(item, zsc, config, premise), corpus.items
    )

    kept, dropped = [], []
    for item, outcome in zip(corpus.items, outcomes):
        if outcome.ok:
            (dropped if outcome.result else kept).append(item)
            continue

        if isinstance(outcome.error, FATAL_ERRORS):
            raise outcome.error
        error = PipelineError(STAGE, item.id, outcome.error)
        if errors is None:
            raise error from outcome.error
        logging.error("%s", error)
        errors.append(error)

    logging.info(
        "Stock filter kept %s, dropped %s and skipped %s of %s item(s)",
        len(kept),
        len(dropped),
        len(corpus) - len(kept) - len(dropped),
        len(corpus),
    )
    return Corpus(items=kept), Corpus(items=dropped)

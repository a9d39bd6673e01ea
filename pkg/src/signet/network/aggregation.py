"""
aggregation folds relation observations into signed edges, snapshots and
temporal networks
"""

import datetime
import math
from collections import defaultdict
from typing import Dict, Iterable, List, Sequence

from signet.core.errors import NoEdgeError
from signet.core.logging import logging
from signet.core.types import FOUR_CLASSES, RelationLabel, Weighting
from signet.core.utils import floor_to
from signet.network.models import (
    NetworkSnapshot,
    SignedEdge,
    TemporalNetwork,
    Window,
)
from signet.relations.models import EntityPair, RelationObservation

PLACES = 6


def aggregate_edge(
    observations: Sequence[RelationObservation],
    weighting: Weighting = Weighting.CONFIDENCE,
) -> SignedEdge:
    """
    Aggregates the observations of one pair. Unknown observations are
    tallied but excluded from the weight and the score sum. With the
    confidence rule the weight is sum(s * s * sign) / sum(s); with the
    sign rule it is sum(s * sign) / sum(s). Signed observations that all
    score zero give a weight of 0. Sums are exact, so the observation
    order never matters

    :param observations: Observations of a single pair
    :param weighting: Aggregation rule
    :return: Edge with weight and score sum rounded to 6 places
    :raises NoEdgeError: If no observation carries a sign
    """
    if not observations:
        raise NoEdgeError("no observations")
    pair = observations[0].pair
    if any(observation.pair != pair for observation in observations):
        raise ValueError("observations must all be about the same pair")

    tallies = {label: 0 for label in FOUR_CLASSES}
    for observation in observations:
        tallies[observation.label] += 1

    signed = [o for o in observations if o.label != RelationLabel.UNKNOWN]
    if not signed:
        raise NoEdgeError(f"only unknown observations for {pair}")

    score_sum = math.fsum(o.score for o in signed)
    if weighting == Weighting.CONFIDENCE:
        numerator = math.fsum(
            o.score * o.score * o.label.value_numeric for o in signed
        )
    else:
        numerator = math.fsum(o.score * o.label.value_numeric for o in signed)

    weight = numerator / score_sum if score_sum > 0 else 0.0
    return SignedEdge(
        pair=pair,
        weight=round(weight, PLACES) + 0.0,
        tallies=tallies,
        score_sum=round(score_sum, PLACES),
        observation_ids=tuple(sorted(o.id for o in observations)),
    )


def build_snapshot(
    observations: Iterable[RelationObservation],
    window: Window,
    weighting: Weighting = Weighting.CONFIDENCE,
    include_isolated: bool = False,
) -> NetworkSnapshot:
    """
    Builds the snapshot of one window

    :param observations: Observations, in any order
    :param window: Window, observations outside are ignored
    :param weighting: Aggregation rule
    :param include_isolated: Keep entities whose pairs have no edge
    :return: Snapshot
    """
    by_pair: Dict[EntityPair, List[RelationObservation]] = defaultdict(list)
    for observation in observations:
        if observation.published_at in window:
            by_pair[observation.pair].append(observation)

    edges, nodes = [], set()
    for pair in sorted(by_pair, key=lambda p: p.key):
        if include_isolated:
            nodes.update(pair.key)
        try:
            edges.append(aggregate_edge(by_pair[pair], weighting))
        except NoEdgeError:
            logging.debug("No edge for %s in %s", pair, window)
            continue
        nodes.update(pair.key)

    return NetworkSnapshot(
        window=window, nodes=tuple(sorted(nodes)), edges=tuple(edges)
    )


def windows(
    earliest: datetime.datetime,
    latest: datetime.datetime,
    window_length: datetime.timedelta,
    stride: datetime.timedelta,
) -> List[Window]:
    """
    Lists the windows covering a time range. The first starts at the
    earliest date floored to the stride, counted from the unix epoch

    :param earliest: Earliest date
    :param latest: Latest date
    :param window_length: Window length
    :param stride: Distance between window starts
    :return: Windows ordered by start
    """
    if window_length <= datetime.timedelta(0):
        raise ValueError("window length must be positive")
    if stride <= datetime.timedelta(0):
        raise ValueError("stride must be positive")

    result = []
    start = floor_to(earliest, stride)
    while start <= latest:
        result.append(Window(start=start, end=start + window_length))
        start += stride
    return result


def build_temporal(
    observations: Sequence[RelationObservation],
    window_length: datetime.timedelta,
    stride: datetime.timedelta,
    weighting: Weighting = Weighting.CONFIDENCE,
    include_isolated: bool = False,
) -> TemporalNetwork:
    """
    Builds one snapshot per window. With a stride shorter than the
    window length, windows overlap and an observation may count in
    several snapshots

    :param observations: Observations
    :param window_length: Window length
    :param stride: Distance between window starts
    :param weighting: Aggregation rule
    :param include_isolated: Keep entities whose pairs have no edge
    :return: Temporal network, empty without observations
    """
    if window_length <= datetime.timedelta(0):
        raise ValueError("window length must be positive")
    if stride <= datetime.timedelta(0):
        raise ValueError("stride must be positive")

    snapshots = []
    if observations:
        dates = [observation.published_at for observation in observations]
        for window in windows(min(dates), max(dates), window_length, stride):
            snapshots.append(
                build_snapshot(
                    observations, window, weighting, include_isolated
                )
            )

    logging.info(
        "Built %s snapshot(s) from %s observation(s)",
        len(snapshots),
        len(observations),
    )
    return TemporalNetwork(
        snapshots=tuple(snapshots), window_length=window_length, stride=stride
    )

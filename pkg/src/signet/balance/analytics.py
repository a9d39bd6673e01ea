"""
analytics implements strong (Heider) structural balance over discretized
snapshots: triad census, balance index and sign prediction for pairs
without an edge
"""

import itertools
from typing import Dict, Iterable, List, Mapping, Optional, Tuple

import networkx as nx
from pydantic import BaseModel, ConfigDict, Field, model_validator

from signet.core.errors import UndefinedBalanceError
from signet.core.logging import logging
from signet.core.types import PredictedSign
from signet.network.models import NetworkSnapshot, sign
from signet.relations.models import EntityPair

TRIAD_TYPES = ("+++", "++-", "+--", "---")
BALANCED_TRIADS = ("+++", "+--")
FORMULATION = "strong"


class DiscretizedGraph:
    """
    DiscretizedGraph is an undirected graph whose edges carry a sign of
    +1 or -1
    """

    def __init__(
        self,
        nodes: Iterable[str] = (),
        signed_edges: Optional[Mapping[EntityPair, int]] = None,
    ):
        self.graph = nx.Graph()
        self.graph.add_nodes_from(nodes)
        for pair, edge_sign in (signed_edges or {}).items():
            if edge_sign not in (1, -1):
                raise ValueError(f"edge {pair} has sign {edge_sign}")
            self.graph.add_edge(pair.a, pair.b, sign=edge_sign)

    @property
    def nodes(self) -> List[str]:
        """
        Property that holds the sorted node ids
        """
        return sorted(self.graph.nodes)

    @property
    def signed_edges(self) -> Dict[EntityPair, int]:
        """
        Property that holds the sign of every edge, ordered by pair
        """
        edges = {
            EntityPair.of(a, b): data["sign"]
            for a, b, data in self.graph.edges(data=True)
        }
        return dict(sorted(edges.items(), key=lambda e: e[0].key))

    def sign_of(self, a: str, b: str) -> Optional[int]:
        """
        Get the sign of an edge

        :param a: An endpoint
        :param b: The other endpoint
        :return: The sign, None without edge
        """
        data = self.graph.get_edge_data(a, b)
        return None if data is None else data["sign"]

    def flipped(self) -> "DiscretizedGraph":
        """
        Get the graph with every sign negated

        :return: New graph
        """
        return DiscretizedGraph(
            self.nodes,
            {pair: -value for pair, value in self.signed_edges.items()},
        )


def discretize(
    snapshot: NetworkSnapshot, tau: float = 0.1
) -> DiscretizedGraph:
    """
    Keeps the edges whose weight magnitude reaches tau, with their sign.
    Zero weights are always dropped

    :param snapshot: Snapshot
    :param tau: Smallest weight magnitude kept
    :return: Discretized graph over all snapshot nodes
    """
    signed = {}
    for edge in snapshot.edges:
        edge_sign = sign(edge.weight, tau)
        if edge_sign != 0:
            signed[edge.pair] = edge_sign
    return DiscretizedGraph(snapshot.nodes, signed)


class TriadCensus(BaseModel):
    """
    TriadCensus counts closed triangles by their sign multiset
    """

    model_config = ConfigDict(frozen=True)

    counts: Dict[str, int] = Field(
        default_factory=lambda: {triad: 0 for triad in TRIAD_TYPES}
    )

    @model_validator(mode="after")
    def check_counts(self):
        """
        Checks every triad type is counted once and non-negative
        """
        if set(self.counts) != set(TRIAD_TYPES):
            raise ValueError(f"counts must cover {', '.join(TRIAD_TYPES)}")
        if any(count < 0 for count in self.counts.values()):
            raise ValueError("counts must be non-negative")
        return self

    @property
    def total(self) -> int:
        """
        Property that holds the number of triangles
        """
        return sum(self.counts.values())


def triad_type(signs: Iterable[int]) -> str:
    """
    Get the triad type of three signs

    :param signs: Three signs of +1 or -1
    :return: Multiset written positives first, e.g. "++-"
    """
    ordered = sorted(signs, reverse=True)
    if len(ordered) != 3:
        raise ValueError("a triad has three edges")
    return "".join("+" if value > 0 else "-" for value in ordered)


def triad_census(graph: DiscretizedGraph) -> TriadCensus:
    """
    Counts every closed triangle once, visiting each from its smallest
    node

    :param graph: Discretized graph
    :return: Census
    """
    counts = {triad: 0 for triad in TRIAD_TYPES}
    g = graph.graph
    for u in sorted(g.nodes):
        higher = sorted(v for v in g.neighbors(u) if v > u)
        for v, w in itertools.combinations(higher, 2):
            if g.has_edge(v, w):
                triad = triad_type(
                    (
                        g[u][v]["sign"],
                        g[u][w]["sign"],
                        g[v][w]["sign"],
                    )
                )
                counts[triad] += 1
    return TriadCensus(counts=counts)


def balance_index(census: TriadCensus) -> float:
    """
    Computes the share of balanced triangles, those whose sign product
    is +1

    :param census: Triad census
    :return: Fraction in [0, 1]
    :raises UndefinedBalanceError: If the census has no triangle
    """
    if census.total == 0:
        raise UndefinedBalanceError("balance is undefined without triangles")
    balanced = sum(census.counts[triad] for triad in BALANCED_TRIADS)
    return balanced / census.total


class EdgePrediction(BaseModel):
    """
    EdgePrediction is the balance vote on the sign of a missing edge
    """

    model_config = ConfigDict(frozen=True)

    pair: EntityPair
    predicted: PredictedSign
    votes: Tuple[int, int]

    @model_validator(mode="after")
    def check_votes(self):
        """
        Checks the prediction follows the majority of votes
        """
        positive, negative = self.votes
        if positive < 0 or negative < 0:
            raise ValueError("votes must be non-negative")
        if positive > negative:
            expected = PredictedSign.POSITIVE
        elif negative > positive:
            expected = PredictedSign.NEGATIVE
        else:
            expected = PredictedSign.UNKNOWN
        if self.predicted != expected:
            raise ValueError(
                f"prediction {self.predicted} disagrees with votes"
                f" {self.votes}"
            )
        return self


def predict_edge_sign(
    graph: DiscretizedGraph, pair: EntityPair
) -> EdgePrediction:
    """
    Predicts the sign of a missing edge. Every common neighbour k votes
    sign(a, k) * sign(b, k); the majority wins and ties or the absence of
    common neighbours give unknown

    :param graph: Discretized graph
    :param pair: Pair without an edge
    :return: Prediction with (positive, negative) votes
    :raises ValueError: If the pair already is an edge
    """
    if graph.sign_of(pair.a, pair.b) is not None:
        raise ValueError(f"{pair} already is an edge")

    positive = negative = 0
    g = graph.graph
    if pair.a in g and pair.b in g:
        for k in nx.common_neighbors(g, pair.a, pair.b):
            if g[pair.a][k]["sign"] * g[pair.b][k]["sign"] > 0:
                positive += 1
            else:
                negative += 1

    if positive > negative:
        predicted = PredictedSign.POSITIVE
    elif negative > positive:
        predicted = PredictedSign.NEGATIVE
    else:
        predicted = PredictedSign.UNKNOWN
    return EdgePrediction(
        pair=pair, predicted=predicted, votes=(positive, negative)
    )


def predict_missing_edges(graph: DiscretizedGraph) -> List[EdgePrediction]:
    """
    Predicts every pair without an edge whose endpoints share at least
    one neighbour

    :param graph: Discretized graph
    :return: Predictions ordered by pair
    """
    g = graph.graph
    predictions = []
    for a, b in itertools.combinations(graph.nodes, 2):
        if g.has_edge(a, b):
            continue
        if not any(True for _ in nx.common_neighbors(g, a, b)):
            continue
        predictions.append(predict_edge_sign(graph, EntityPair.of(a, b)))
    return predictions


def analyze_snapshot(
    snapshot: NetworkSnapshot, tau: float = 0.1
) -> Dict[str, object]:
    """
    Runs the balance analytics of a snapshot

    :param snapshot: Snapshot
    :param tau: Smallest weight magnitude kept
    :return: Record with the window, census, balance index (None when
        undefined) and predictions
    """
    graph = discretize(snapshot, tau)
    census = triad_census(graph)
    try:
        index = balance_index(census)
    except UndefinedBalanceError:
        logging.info("No triangle in %s, balance undefined", snapshot.window)
        index = None

    return {
        "window": snapshot.window.model_dump(mode="json"),
        "formulation": FORMULATION,
        "tau": tau,
        "census": dict(census.counts),
        "triangles": census.total,
        "balance_index": index,
        "predictions": [
            prediction.model_dump(mode="json")
            for prediction in predict_missing_edges(graph)
        ],
    }

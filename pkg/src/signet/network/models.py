"""
models declares signed edges, windowed network snapshots, temporal
networks and snapshot diffs
"""

import datetime
from typing import Annotated, Dict, Optional, Tuple

from pydantic import (
    BaseModel,
    BeforeValidator,
    ConfigDict,
    Field,
    PlainSerializer,
    model_validator,
)

from signet.core.types import FOUR_CLASSES, RelationLabel
from signet.core.utils import (
    UtcDatetime,
    format_timedelta,
    format_utc,
    parse_timedelta,
)
from signet.relations.models import EntityPair

Duration = Annotated[
    datetime.timedelta,
    BeforeValidator(parse_timedelta),
    PlainSerializer(format_timedelta, return_type=str, when_used="json"),
]


def sign(weight: float, tau: float = 0.0) -> int:
    """
    Discretizes a weight

    :param weight: Edge weight
    :param tau: Smallest magnitude kept
    :return: 1, -1, or 0 when the weight is zero or below tau
    """
    if weight == 0 or abs(weight) < tau:
        return 0
    return 1 if weight > 0 else -1


class Window(BaseModel):
    """
    Window is a half-open UTC interval [start, end)
    """

    model_config = ConfigDict(frozen=True)

    start: UtcDatetime
    end: UtcDatetime

    @model_validator(mode="after")
    def check_bounds(self):
        """
        Checks the window is not empty
        """
        if self.end <= self.start:
            raise ValueError(
                f"window end {format_utc(self.end)} is not after start"
                f" {format_utc(self.start)}"
            )
        return self

    def __contains__(self, date: datetime.datetime) -> bool:
        return self.start <= date < self.end

    def __str__(self):
        return f"[{format_utc(self.start)}, {format_utc(self.end)})"


class SignedEdge(BaseModel):
    """
    SignedEdge aggregates the observations of one pair. Unknown
    observations are tallied and referenced but carry no weight
    """

    model_config = ConfigDict(frozen=True)

    pair: EntityPair
    weight: float = Field(ge=-1.0, le=1.0)
    tallies: Dict[RelationLabel, int]
    score_sum: float = Field(ge=0.0)
    observation_ids: Tuple[str, ...]

    @model_validator(mode="after")
    def check_tallies(self):
        """
        Checks every label is tallied and a signed observation exists
        """
        if set(self.tallies) != set(FOUR_CLASSES):
            raise ValueError("tallies must count every label")
        if self.tallies[RelationLabel.UNKNOWN] == sum(self.tallies.values()):
            raise ValueError("an edge needs a non-unknown observation")
        return self

    @property
    def sign(self) -> int:
        """
        Property that holds the sign of the weight
        """
        return sign(self.weight)


class NetworkSnapshot(BaseModel):
    """
    NetworkSnapshot is the signed network of one window. Nodes and edges
    are sorted and every edge endpoint is a node
    """

    model_config = ConfigDict(frozen=True)

    window: Window
    nodes: Tuple[str, ...] = ()
    edges: Tuple[SignedEdge, ...] = ()

    @model_validator(mode="after")
    def check_graph(self):
        """
        Checks ordering, uniqueness and endpoints
        """
        if list(self.nodes) != sorted(set(self.nodes)):
            raise ValueError("nodes must be sorted and unique")
        keys = [edge.pair.key for edge in self.edges]
        if keys != sorted(set(keys)):
            raise ValueError("edges must be sorted and unique per pair")
        nodes = set(self.nodes)
        for edge in self.edges:
            if edge.pair.a not in nodes or edge.pair.b not in nodes:
                raise ValueError(f"edge {edge.pair} has an unknown endpoint")
        return self

    def edge(self, pair: EntityPair) -> Optional[SignedEdge]:
        """
        Get the edge of a pair

        :param pair: Entity pair
        :return: The edge, None if absent
        """
        return next((e for e in self.edges if e.pair == pair), None)

    def weights(self) -> Dict[EntityPair, float]:
        """
        Get the weight of every edge

        :return: Weight by pair
        """
        return {edge.pair: edge.weight for edge in self.edges}


class TemporalNetwork(BaseModel):
    """
    TemporalNetwork is a sequence of snapshots ordered by window start
    """

    model_config = ConfigDict(frozen=True)

    snapshots: Tuple[NetworkSnapshot, ...] = ()
    window_length: Duration
    stride: Duration

    @model_validator(mode="after")
    def check_order(self):
        """
        Checks the windows are ordered
        """
        starts = [snapshot.window.start for snapshot in self.snapshots]
        if starts != sorted(starts):
            raise ValueError("snapshots must be ordered by window start")
        return self

    def __len__(self) -> int:
        return len(self.snapshots)


class SignFlip(BaseModel):
    """
    SignFlip is a pair whose discretized sign changed
    """

    model_config = ConfigDict(frozen=True)

    pair: EntityPair
    before: int
    after: int


class WeightDelta(BaseModel):
    """
    WeightDelta is a pair whose weight changed
    """

    model_config = ConfigDict(frozen=True)

    pair: EntityPair
    before: float
    after: float


class SnapshotDiff(BaseModel):
    """
    SnapshotDiff holds the changes between two snapshots. Sign flips and
    weight deltas only concern pairs present in both
    """

    model_config = ConfigDict(frozen=True)

    tau: float = Field(ge=0.0, le=1.0)
    added: Tuple[SignedEdge, ...] = ()
    removed: Tuple[SignedEdge, ...] = ()
    sign_flips: Tuple[SignFlip, ...] = ()
    weight_deltas: Tuple[WeightDelta, ...] = ()

    @property
    def empty(self) -> bool:
        """
        Property that is True when nothing changed
        """
        return not (
            self.added or self.removed or self.sign_flips or self.weight_deltas
        )

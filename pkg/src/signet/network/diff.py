"""
diff compares two snapshots of the signed network
"""

from typing import Dict

from signet.network.models import (
    NetworkSnapshot,
    SignFlip,
    SnapshotDiff,
    WeightDelta,
    sign,
)
from signet.relations.models import EntityPair


def diff_snapshots(
    before: NetworkSnapshot, after: NetworkSnapshot, tau: float = 0.1
) -> SnapshotDiff:
    """
    Compares two snapshots. Every collection is ordered by pair

    :param before: Earlier snapshot
    :param after: Later snapshot
    :param tau: Smallest weight magnitude counted as signed
    :return: Edges added and removed, sign flips and weight deltas of
        the pairs present in both
    """
    old = {edge.pair.key: edge for edge in before.edges}
    new = {edge.pair.key: edge for edge in after.edges}

    flips, deltas = [], []
    for key in sorted(old.keys() & new.keys()):
        was, now = old[key], new[key]
        if sign(was.weight, tau) != sign(now.weight, tau):
            flips.append(
                SignFlip(
                    pair=was.pair,
                    before=sign(was.weight, tau),
                    after=sign(now.weight, tau),
                )
            )
        if was.weight != now.weight:
            deltas.append(
                WeightDelta(pair=was.pair, before=was.weight, after=now.weight)
            )

    return SnapshotDiff(
        tau=tau,
        added=tuple(new[key] for key in sorted(new.keys() - old.keys())),
        removed=tuple(old[key] for key in sorted(old.keys() - new.keys())),
        sign_flips=tuple(flips),
        weight_deltas=tuple(deltas),
    )


def apply_diff(
    before: NetworkSnapshot, diff: SnapshotDiff
) -> Dict[EntityPair, float]:
    """
    Applies a diff to the weights of a snapshot

    :param before: Snapshot the diff was computed from
    :param diff: Diff
    :return: Weight by pair of the later snapshot
    """
    weights = before.weights()
    for edge in diff.removed:
        del weights[edge.pair]
    for edge in diff.added:
        weights[edge.pair] = edge.weight
    for delta in diff.weight_deltas:
        weights[delta.pair] = delta.after
    return weights

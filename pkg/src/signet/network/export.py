"""
export serializes snapshots and diffs. JSON is the lossless form read
back by the other commands; DOT and GraphML are rendered from templates
for graph tools
"""

import json
from typing import Any, Dict, Optional

from signet.core.template_factory import TemplateFactory
from signet.core.types import ExportFormat, RelationLabel
from signet.core.utils import canonical_json
from signet.network.models import (
    NetworkSnapshot,
    SignedEdge,
    SnapshotDiff,
    Window,
)
from signet.relations.models import EntityPair

STYLES = {1: "solid", -1: "dashed", 0: "dotted"}
COLORS = {1: "darkgreen", -1: "red", 0: "gray"}
COMPACT_UTC = "%Y%m%dT%H%M%SZ"


def edge_record(edge: SignedEdge) -> Dict[str, Any]:
    """
    Get the canonical record of an edge

    :param edge: Signed edge
    :return: Record with flat endpoints
    """
    return {
        "a": edge.pair.a,
        "b": edge.pair.b,
        "weight": edge.weight,
        "score_sum": edge.score_sum,
        "tallies": {str(k): v for k, v in edge.tallies.items()},
        "observations": list(edge.observation_ids),
    }


def snapshot_record(snapshot: NetworkSnapshot) -> Dict[str, Any]:
    """
    Get the canonical record of a snapshot

    :param snapshot: Snapshot
    :return: Record
    """
    return {
        "window": snapshot.window.model_dump(mode="json"),
        "nodes": list(snapshot.nodes),
        "edges": [edge_record(edge) for edge in snapshot.edges],
    }


def _change_record(pair: EntityPair, before: Any, after: Any) -> dict:
    return {"a": pair.a, "b": pair.b, "before": before, "after": after}


def diff_record(diff: SnapshotDiff) -> Dict[str, Any]:
    """
    Get the canonical record of a diff

    :param diff: Snapshot diff
    :return: Record
    """
    return {
        "tau": diff.tau,
        "added": [edge_record(edge) for edge in diff.added],
        "removed": [edge_record(edge) for edge in diff.removed],
        "sign_flips": [
            _change_record(flip.pair, flip.before, flip.after)
            for flip in diff.sign_flips
        ],
        "weight_deltas": [
            _change_record(delta.pair, delta.before, delta.after)
            for delta in diff.weight_deltas
        ],
    }


def _edge_from_record(record: Dict[str, Any]) -> SignedEdge:
    return SignedEdge(
        pair=EntityPair(a=record["a"], b=record["b"]),
        weight=record["weight"],
        score_sum=record["score_sum"],
        tallies={
            RelationLabel.from_string(k): v
            for k, v in record["tallies"].items()
        },
        observation_ids=tuple(record["observations"]),
    )


def import_snapshot(data: bytes | str) -> NetworkSnapshot:
    """
    Reads a snapshot exported as JSON

    :param data: JSON document
    :return: Snapshot
    :raises ValueError: If the document is not a snapshot
    """
    try:
        record = json.loads(data)
        return NetworkSnapshot(
            window=Window(**record["window"]),
            nodes=tuple(record["nodes"]),
            edges=tuple(_edge_from_record(e) for e in record["edges"]),
        )
    except (KeyError, TypeError) as exc:
        raise ValueError(f"not a snapshot document: {exc}") from exc


def load_snapshot(path: str) -> NetworkSnapshot:
    """
    Reads a snapshot file

    :param path: Path of a JSON snapshot
    :return: Snapshot
    """
    with open(path, "rb") as snapshot_file:
        return import_snapshot(snapshot_file.read())


def snapshot_name(snapshot: NetworkSnapshot) -> str:
    """
    Get the file name of a snapshot

    :param snapshot: Snapshot
    :return: "<start>_<end>.json" in compact UTC
    """
    window = snapshot.window
    return (
        f"{window.start.strftime(COMPACT_UTC)}_"
        f"{window.end.strftime(COMPACT_UTC)}.json"
    )


def export_snapshot(
    snapshot: NetworkSnapshot,
    export_format: ExportFormat | str = ExportFormat.JSON,
    factory: Optional[TemplateFactory] = None,
) -> bytes:
    """
    Exports a snapshot. Output is byte deterministic

    :param snapshot: Snapshot
    :param export_format: json, dot or graphml
    :param factory: Template factory for dot and graphml
    :return: Encoded document
    :raises ValueError: If the format is unknown
    """
    export_format = ExportFormat(export_format)
    if export_format == ExportFormat.JSON:
        return (canonical_json(snapshot_record(snapshot)) + "\n").encode()

    edges = [
        {
            "edge": edge,
            "sign": edge.sign,
            "style": STYLES[edge.sign],
            "color": COLORS[edge.sign],
            "observations": len(edge.observation_ids),
        }
        for edge in snapshot.edges
    ]
    factory = factory or TemplateFactory()
    return factory.render(
        f"graphs/snapshot.{export_format}.j2",
        snapshot=snapshot,
        edges=edges,
    ).encode()


def export_diff(diff: SnapshotDiff) -> bytes:
    """
    Exports a diff as canonical JSON

    :param diff: Snapshot diff
    :return: Encoded document
    """
    return (canonical_json(diff_record(diff)) + "\n").encode()

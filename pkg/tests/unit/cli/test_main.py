import json
import math
import os
import signal

import pytest

from signet.cli import commands
from signet.cli.main import build_parser, main, overrides_from_args
from signet.core.errors import BackendError
from signet.core.types import Capability
from signet.entities.resolver import resolve
from signet.gateway.backends import Gateway
from signet.gateway.fixtures import ReplayFixture, canonical_digest
from signet.ingestion.news import load_corpus
from signet.network.export import load_snapshot

GOLDEN_DOT = os.path.join(
    os.path.dirname(os.path.realpath(__file__)),
    "..",
    "network",
    "golden",
    "headlines.dot",
)
SNAPSHOT = os.path.join("snapshots", "20210403T000000Z_20210503T000000Z.json")


@pytest.fixture(autouse=True)
def isolated(tmp_path, monkeypatch):
    monkeypatch.delenv("SIGNET_CONFIG", raising=False)
    monkeypatch.chdir(tmp_path)
    handlers = {
        signum: signal.getsignal(signum)
        for signum in (signal.SIGINT, signal.SIGTERM)
    }
    yield
    for signum, handler in handlers.items():
        signal.signal(signum, handler)


def replay(fixtures_dir, out_dir, *flags):
    return main(
        [
            "--config",
            os.path.join(fixtures_dir, "config.yml"),
            "--out",
            str(out_dir),
            "run",
            *flags,
        ]
    )


def read_tree(root):
    files = {}
    for directory, _, names in os.walk(root):
        for name in names:
            path = os.path.join(directory, name)
            with open(path, "rb") as output_file:
                files[os.path.relpath(path, root)] = output_file.read()
    return files


@pytest.fixture()
def run_dir(fixtures_dir, tmp_path):
    out_dir = tmp_path / "run"
    assert replay(fixtures_dir, out_dir) == 0
    return out_dir


class TestReplayRun:
    def test_outputs(self, run_dir):
        for name in (
            "corpus.jsonl",
            "dropped.jsonl",
            "observations.jsonl",
            "explanations.jsonl",
            SNAPSHOT,
            "snapshot_before.json",
            "snapshot_after.json",
            "diff.json",
            "balance.json",
            "report.json",
            "metrics.prom",
        ):
            assert os.path.isfile(run_dir / name), name

    def test_snapshot(self, run_dir):
        snapshot = load_snapshot(str(run_dir / SNAPSHOT))

        assert snapshot.nodes == (
            "apple",
            "facebook",
            "google",
            "snap",
            "tiktok",
        )
        assert {e.pair.key: e.weight for e in snapshot.edges} == {
            ("apple", "facebook"): -0.886628,
            ("apple", "google"): 0.2916,
            ("apple", "snap"): -0.97,
            ("facebook", "google"): -0.64,
            ("facebook", "tiktok"): -0.98,
        }

    def test_event_split(self, run_dir):
        with open(run_dir / "diff.json", encoding="utf-8") as diff_file:
            diff = json.load(diff_file)

        assert [(e["a"], e["b"]) for e in diff["added"]] == [
            ("apple", "facebook"),
            ("apple", "google"),
            ("apple", "snap"),
            ("facebook", "google"),
        ]
        assert [(e["a"], e["b"]) for e in diff["removed"]] == [
            ("facebook", "tiktok")
        ]
        assert diff["sign_flips"] == []

    def test_balance(self, run_dir):
        with open(run_dir / "balance.json", encoding="utf-8") as balance:
            (record,) = json.load(balance)["snapshots"]

        assert record["triangles"] == 1
        assert record["balance_index"] == 1.0
        assert {
            (p["pair"]["a"], p["pair"]["b"]): p["predicted"]
            for p in record["predictions"]
        } == {
            ("apple", "tiktok"): "positive",
            ("facebook", "snap"): "positive",
            ("google", "snap"): "negative",
            ("google", "tiktok"): "positive",
        }

    def test_report(self, run_dir):
        with open(run_dir / "report.json", encoding="utf-8") as report:
            data = json.load(report)

        assert data["errors"] == []
        assert data["stages"]["ingest"] == {"items_in": 4, "items_out": 4}
        assert data["stages"]["filter"]["items_out"] == 4
        assert data["stages"]["explain"]["items_out"] == 10

    def test_deterministic(self, run_dir, fixtures_dir, tmp_path):
        again = tmp_path / "again"
        assert replay(fixtures_dir, again) == 0

        first, second = read_tree(run_dir), read_tree(again)
        del first["metrics.prom"], second["metrics.prom"]
        assert first == second

    def test_export_golden(self, run_dir, capsys):
        assert (
            main(
                [
                    "export",
                    "--snapshot",
                    str(run_dir / SNAPSHOT),
                    "--format",
                    "dot",
                ]
            )
            == 0
        )

        with open(GOLDEN_DOT, encoding="utf-8") as golden:
            assert capsys.readouterr().out == golden.read()

    def test_analyze(self, run_dir, capsys):
        assert main(["analyze", "--snapshot", str(run_dir / SNAPSHOT)]) == 0

        record = json.loads(capsys.readouterr().out)
        assert record["census"]["+--"] == 1
        assert record["formulation"] == "strong"

    def test_predict(self, run_dir, capsys):
        snapshot = str(run_dir / SNAPSHOT)

        assert (
            main(["predict", "--snapshot", snapshot, "--pair", "snap,google"])
            == 0
        )

        prediction = json.loads(capsys.readouterr().out)
        assert prediction == {
            "pair": {"a": "google", "b": "snap"},
            "predicted": "negative",
            "votes": [0, 1],
        }

    def test_predict_existing_edge(self, run_dir):
        snapshot = str(run_dir / SNAPSHOT)

        assert (
            main(["predict", "--snapshot", snapshot, "--pair", "apple,snap"])
            == 1
        )


class TestUsageErrors:
    def test_missing_corpus(self):
        assert main(["run"]) == 1

    def test_missing_config(self, tmp_path):
        assert main(["--config", str(tmp_path / "none.yml"), "run"]) == 1

    def test_invalid_value(self, fixtures_dir, tmp_path):
        assert replay(fixtures_dir, tmp_path / "out", "--tau", "2") == 1

    def test_replay_miss(self, fixtures_dir, tmp_path):
        assert replay(fixtures_dir, tmp_path / "out", "--classes", "4") == 1

    def test_unknown_command(self):
        with pytest.raises(SystemExit):
            main(["rebalance"])


class TestEntitiesValidate:
    def test_packaged_table(self, capsys):
        assert main(["entities", "validate"]) == 0
        assert "no conflict" in capsys.readouterr().out

    def test_conflicts(self, tmp_path, capsys):
        table = tmp_path / "aliases.json"
        table.write_text(
            json.dumps(
                [
                    {"id": "meta", "display_name": "Meta", "aliases": ["FB"]},
                    {"id": "fb", "display_name": "FB"},
                ]
            ),
            encoding="utf-8",
        )

        assert main(["entities", "validate", "--alias-table", str(table)]) == 1
        assert "claimed by fb, meta" in capsys.readouterr().out


def test_overrides_from_args():
    args = build_parser().parse_args(
        ["--mode", "replay", "run", "--tau", "0.2", "--context", "on"]
    )

    assert overrides_from_args(args) == {
        "mode": "replay",
        "network": {"tau": 0.2},
        "relations": {"context": {"enabled": True}},
    }


class ShippedTransport:
    """Answers live requests from the shipped replay fixture"""

    def __init__(self, capability, model_id, fixture, unreachable):
        self.capability = capability
        self.model_id = model_id
        self.fixture = fixture
        self.unreachable = unreachable
        self.calls = 0

    def post(self, payload):
        self.calls += 1
        text = json.dumps(payload, ensure_ascii=False)
        if any(marker in text for marker in self.unreachable):
            raise BackendError(
                str(self.capability), "connection refused", attempts=4
            )
        return self.fixture.get(
            canonical_digest(
                {
                    "capability": str(self.capability),
                    "model": self.model_id,
                    "request": payload,
                }
            )
        )


@pytest.fixture()
def unreachable(fixtures_dir, monkeypatch):
    """Requests containing one of these texts fail as if offline"""
    shipped = ReplayFixture(os.path.join(fixtures_dir, "fixtures.jsonl"))
    markers = set()

    def gateway(config, fixture=None, metrics=None):
        transports = {
            capability: ShippedTransport(
                capability,
                config.backend(capability).model_id,
                shipped,
                markers,
            )
            for capability in Capability
        }
        return Gateway(config, fixture, transports, metrics)

    monkeypatch.setattr(commands, "Gateway", gateway)
    return markers


@pytest.fixture()
def headlines(fixtures_dir):
    with open(
        os.path.join(fixtures_dir, "corpus.jsonl"), encoding="utf-8"
    ) as corpus:
        return corpus.readlines()


@pytest.fixture()
def two_headlines(headlines, tmp_path):
    corpus_path = tmp_path / "corpus.jsonl"
    corpus_path.write_text("".join(headlines[:2]), encoding="utf-8")

    config = {
        "paths": {
            "corpus": str(corpus_path),
            "fixtures": str(tmp_path / "recorded.jsonl"),
        },
        "gateway": {
            str(capability): {
                "endpoint": f"http://models.invalid/{capability}"
            }
            for capability in Capability
        },
        "max_workers": 1,
        "entities": {"include_unresolved": False},
        "relations": {"pair_scope": "focal"},
    }
    config_path = tmp_path / "signet.yml"
    config_path.write_text(json.dumps(config), encoding="utf-8")
    return str(config_path)


class TestRecordReplay:
    def test_record_then_replay(self, unreachable, two_headlines, tmp_path):
        recorded, replayed = tmp_path / "recorded", tmp_path / "replayed"

        assert (
            main(["--config", two_headlines, "--out", str(recorded), "record"])
            == 0
        )
        fixture = ReplayFixture(str(tmp_path / "recorded.jsonl"))
        assert len(fixture) == 8

        args = ["--config", two_headlines, "--mode", "replay"]
        assert main([*args, "--out", str(replayed), "run"]) == 0

        for name in ("observations.jsonl", "explanations.jsonl", SNAPSHOT):
            assert (recorded / name).read_bytes() == (
                replayed / name
            ).read_bytes()

    @pytest.mark.parametrize(
        "stock_filter, capability", [(True, "zsc"), (False, "ner")]
    )
    def test_record_offline_is_fatal(
        self,
        unreachable,
        two_headlines,
        tmp_path,
        caplog,
        stock_filter,
        capability,
    ):
        with open(two_headlines, encoding="utf-8") as config_file:
            config = json.load(config_file)
        config["ingestion"] = {"stock_filter": {"enabled": stock_filter}}
        with open(two_headlines, "w", encoding="utf-8") as config_file:
            json.dump(config, config_file)
        unreachable.add("")
        out_dir = tmp_path / "recorded"

        assert (
            main(
                [
                    "--config",
                    two_headlines,
                    "--out",
                    str(out_dir),
                    "record",
                    "--on-error",
                    "skip",
                ]
            )
            == 1
        )
        failures = [
            r.getMessage() for r in caplog.records if r.levelname == "ERROR"
        ]
        failure = failures[-1]
        assert failure.startswith("Pipeline failed:")
        assert f"{capability} backend failed after 4 attempt(s)" in failure
        assert len(ReplayFixture(str(tmp_path / "recorded.jsonl"))) == 0
        assert not (out_dir / "report.json").exists()


class TestPartialRun:
    def test_skipped_item_exits_partial(
        self, unreachable, headlines, two_headlines, tmp_path
    ):
        failing = json.loads(headlines[1])
        unreachable.add(failing["headline"])
        out_dir = tmp_path / "partial"

        code = main(
            [
                "--config",
                two_headlines,
                "--out",
                str(out_dir),
                "run",
                "--on-error",
                "skip",
            ]
        )

        assert code == 2
        report = json.loads((out_dir / "report.json").read_text("utf-8"))
        assert [(e["stage"], e["error"]) for e in report["errors"]] == [
            ("filter", "BackendError")
        ]
        assert report["stages"]["filter"] == {"items_in": 2, "items_out": 1}
        kept = (out_dir / "corpus.jsonl").read_text("utf-8").splitlines()
        assert [json.loads(line)["headline"] for line in kept] == [
            json.loads(headlines[0])["headline"]
        ]
        assert (out_dir / "dropped.jsonl").read_text("utf-8") == ""

    def test_failed_item_is_fatal_by_default(
        self, unreachable, headlines, two_headlines, tmp_path
    ):
        unreachable.add(json.loads(headlines[1])["headline"])

        assert (
            main(
                [
                    "--config",
                    two_headlines,
                    "--out",
                    str(tmp_path / "out"),
                    "run",
                ]
            )
            == 1
        )

    def test_missing_alias_table(self, fixtures_dir, tmp_path, caplog):
        missing = str(tmp_path / "aliases.json")

        code = replay(fixtures_dir, tmp_path / "out", "--alias-table", missing)

        assert code == 1
        assert "invalid configuration 'alias_table'" in caplog.text
        assert "Usage error" in caplog.text

    def test_observations_bounded_by_pairs(
        self, run_dir, alias_table, replay_gateway
    ):
        report = json.loads((run_dir / "report.json").read_text("utf-8"))
        kept = load_corpus(str(run_dir / "corpus.jsonl"))
        bound = 0
        for item in kept.items:
            resolved = [
                resolve(mention, alias_table)
                for mention in replay_gateway.ner.ner(item.headline)
            ]
            entities = {m.entity_id for m in resolved if m.resolved}
            bound += math.comb(len(entities), 2)
        with open(run_dir / "observations.jsonl", encoding="utf-8") as rows:
            methods = [json.loads(row)["method"] for row in rows]
        zsc = methods.count("zsc")

        assert report["stages"]["classify"]["items_out"] == zsc
        assert 0 < zsc <= bound

import os

import pytest

from signet.cli.cli_config import RunConfig, load_run_config, resolve_paths
from signet.core.errors import ConfigError
from signet.core.types import Capability, GatewayMode


@pytest.fixture(autouse=True)
def no_endpoint_env(monkeypatch):
    for capability in Capability:
        name = str(capability).upper()
        monkeypatch.delenv(f"SIGNET_{name}_ENDPOINT", raising=False)
        monkeypatch.delenv(f"SIGNET_{name}_MODEL", raising=False)


@pytest.fixture()
def headlines_config(fixtures_dir):
    return os.path.join(fixtures_dir, "config.yml")


class TestLoadRunConfig:
    def test_replay_bundle(self, headlines_config, fixtures_dir):
        config = load_run_config(headlines_config)

        assert config.mode == GatewayMode.REPLAY
        assert all(
            config.gateway.backend(capability).mode == GatewayMode.REPLAY
            for capability in Capability
        )
        assert config.paths.corpus == os.path.normpath(
            os.path.join(fixtures_dir, "corpus.jsonl")
        )
        assert os.path.isabs(config.paths.fixtures)
        assert config.network.tau == 0.1
        assert config.network.event_date.day == 26

    def test_overrides_win(self, headlines_config):
        config = load_run_config(
            headlines_config, {"network": {"tau": 0.3}, "mode": "live"}
        )

        assert config.network.tau == 0.3
        assert config.network.window.days == 30
        assert config.gateway.llm.mode == GatewayMode.LIVE

    def test_defaults(self):
        config = load_run_config({})

        assert config.mode == GatewayMode.LIVE
        assert config.paths.output_dir == "out"
        assert config.capabilities() == list(Capability)

    def test_invalid_field(self):
        with pytest.raises(ConfigError) as exc:
            load_run_config({"network": {"tau": 2}})

        assert exc.value.field == "network.tau"

    def test_missing_file(self, tmp_path):
        with pytest.raises(ConfigError) as exc:
            load_run_config(str(tmp_path / "missing.yml"))

        assert exc.value.field == "config"


def test_resolve_paths():
    data = {
        "paths": {"corpus": "corpus.jsonl", "fixtures": "/abs/fx.jsonl"},
        "entities": {"alias_table": "../aliases.json"},
        "seed": 3,
    }

    resolved = resolve_paths(data, "/runs/april")

    assert resolved["paths"] == {
        "corpus": "/runs/april/corpus.jsonl",
        "fixtures": "/abs/fx.jsonl",
    }
    assert resolved["entities"]["alias_table"] == "/runs/aliases.json"
    assert data["paths"]["corpus"] == "corpus.jsonl"


class TestRunConfig:
    def test_digest(self):
        base = RunConfig()

        assert base.digest() == RunConfig(
            paths={"output_dir": "elsewhere"}
        ).digest()
        assert base.digest() != RunConfig(network={"tau": 0.2}).digest()
        assert len(base.digest()) == 64

    def test_digest_ignores_checkout_location(self, fixtures_dir, tmp_path):
        digests = []
        for checkout in ("one", "two/nested"):
            bundle = tmp_path / checkout
            bundle.mkdir(parents=True)
            for name in ("config.yml", "corpus.jsonl", "fixtures.jsonl"):
                with open(os.path.join(fixtures_dir, name), "rb") as source:
                    (bundle / name).write_bytes(source.read())
            config = load_run_config(str(bundle / "config.yml"))
            assert os.path.isabs(config.paths.corpus)
            digests.append(config.digest())

        assert digests[0] == digests[1]
        assert digests[0] != RunConfig().digest()

    def test_capabilities(self):
        config = RunConfig(
            zsc_enabled=False,
            ingestion={"stock_filter": {"enabled": False}},
        )

        assert config.capabilities() == [Capability.LLM]
        assert RunConfig(
            zsc_enabled=False, explanation={"enabled": False}
        ).capabilities() == [Capability.ZSC]

    def test_validate_replay(self, headlines_config):
        load_run_config(headlines_config).validate_run()

    def test_validate_corpus(self, tmp_path):
        with pytest.raises(ConfigError) as exc:
            RunConfig().validate_run()
        assert exc.value.field == "corpus"

        config = RunConfig(paths={"corpus": str(tmp_path / "none.jsonl")})
        with pytest.raises(ConfigError) as exc:
            config.validate_run()
        assert exc.value.field == "corpus"

    def test_validate_fixtures(self):
        config = RunConfig(mode="replay")

        with pytest.raises(ConfigError) as exc:
            config.validate_run(require_corpus=False)

        assert exc.value.field == "fixtures"

    def test_validate_endpoint(self):
        config = RunConfig(
            gateway={"ner": {"endpoint": "http://ner.example.com"}}
        )

        with pytest.raises(ConfigError) as exc:
            config.validate_run(require_corpus=False)

        assert exc.value.field == "gateway.zsc.endpoint"

    def test_validate_nothing_remote(self):
        RunConfig(mode="record").validate_run(
            require_corpus=False, capabilities=[]
        )

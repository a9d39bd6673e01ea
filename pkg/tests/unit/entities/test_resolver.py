import pytest

from signet.entities.alias_table import AliasTable, CanonicalEntity
from signet.entities.resolver import (
    Unresolved,
    normalize_surface,
    resolve,
    resolve_surface,
)
from signet.gateway.models import MentionResult


@pytest.fixture(scope="module")
def table():
    return AliasTable.load()


@pytest.mark.parametrize(
    "surface, expected",
    [
        ("Apple", "apple"),
        ("  APPLE  ", "apple"),
        ("Apple Inc.", "apple"),
        ("Apple, Inc.", "apple"),
        ("Microsoft Corp.", "microsoft"),
        ("Google LLC", "google"),
        ("Meta   Platforms", "meta platforms"),
        ('"Snap"', "snap"),
        ("Inc.", "inc"),
        ("Amazon.com", "amazon.com"),
    ],
)
def test_normalize_surface(surface, expected):
    assert normalize_surface(surface) == expected


@pytest.mark.parametrize(
    "surface",
    ["Apple Inc. Inc.", "«Apple Corp»", "  FACEBOOK, ltd ", "Snap Inc"],
)
def test_normalize_is_idempotent(surface):
    once = normalize_surface(surface)
    assert normalize_surface(once) == once


class TestResolve:
    @pytest.mark.parametrize(
        "surface, entity_id",
        [
            ("Apple", "apple"),
            ("Meta", "facebook"),
            ("FB", "facebook"),
            ("Alphabet", "google"),
            ("Snapchat", "snap"),
            ("Tiktok", "tiktok"),
            ("TikTok", "tiktok"),
        ],
    )
    def test_aliases(self, table, surface, entity_id):
        assert resolve_surface(surface, table) == entity_id

    def test_unresolved(self, table):
        result = resolve_surface("GOP Firm", table)

        assert result == Unresolved(surface="gop firm")
        assert result.id == "unresolved:gop-firm"
        assert str(result) == "Unresolved(gop firm)"

    def test_no_fuzzy_matching(self, table):
        assert isinstance(resolve_surface("Appel", table), Unresolved)

    def test_mention(self, table):
        mention = MentionResult(
            surface="Facebook", start=0, end=8, label="ORG", score=0.99
        )

        resolved = resolve(mention, table)

        assert resolved.resolved
        assert resolved.entity_id == "facebook"
        assert resolved.mention == mention

    def test_unresolved_mention(self, table):
        mention = MentionResult(
            surface="GOP Firm", start=14, end=22, label="ORG", score=0.9
        )

        resolved = resolve(mention, table)

        assert not resolved.resolved
        assert resolved.entity_id == "unresolved:gop-firm"


def test_unresolved_id_never_shadows_a_canonical_id():
    table = AliasTable(
        [CanonicalEntity(id="tik-tok", display_name="TikTok Inc.")]
    )

    result = resolve_surface("Tik-Tok", table)

    assert result == Unresolved(surface="tik-tok")
    assert result.id == "unresolved:tik-tok"
    assert result.id not in table

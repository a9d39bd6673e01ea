import datetime

import pytest
import pytz

from signet.core.utils import (
    EPOCH,
    canonical_json,
    collapse_whitespace,
    floor_to,
    format_float,
    format_timedelta,
    format_utc,
    parse_timedelta,
    parse_utc,
    sha256,
    slugify,
)


def test_parse_timedelta():
    assert 0.5 == parse_timedelta("0.5s").total_seconds()
    assert 30 == parse_timedelta("30s").total_seconds()
    assert 30 == parse_timedelta("0.5m").total_seconds()
    assert 0.25 == parse_timedelta("250ms").total_seconds()
    assert 3658 == parse_timedelta("1h58s").total_seconds()
    assert 86400 * 30 == parse_timedelta("30d").total_seconds()
    assert 86400 * 7 == parse_timedelta("1w").total_seconds()
    assert 45 == parse_timedelta(45).total_seconds()
    assert 5400 == parse_timedelta(datetime.timedelta(hours=1.5)).seconds
    assert 90 == parse_timedelta("1m 30s").total_seconds()
    assert 45 == parse_timedelta("45").total_seconds()


@pytest.mark.parametrize("value", ["1mo", "30days", "soon", "", "d", "1h-"])
def test_parse_timedelta_rejects_leftovers(value):
    with pytest.raises(ValueError, match="is not a duration"):
        parse_timedelta(value)


def test_format_timedelta():
    assert format_timedelta(datetime.timedelta(days=30)) == "30d"
    assert format_timedelta(datetime.timedelta(hours=1, minutes=30)) == (
        "1h30m"
    )
    assert format_timedelta(datetime.timedelta(0)) == "0s"
    assert parse_timedelta(format_timedelta(datetime.timedelta(days=2))) == (
        datetime.timedelta(days=2)
    )


def test_format_utc():
    assert (
        format_utc(datetime.datetime(2022, 5, 21, 12, 34, 56, tzinfo=pytz.UTC))
        == "2022-05-21T12:34:56Z"
    )
    assert (
        format_utc(datetime.datetime(2022, 5, 21, 12, 34, 56))
        == "2022-05-21T12:34:56Z"
    )
    assert (
        format_utc(
            pytz.timezone("Europe/Lisbon").localize(
                datetime.datetime(2021, 4, 12, 15, 0)
            )
        )
        == "2021-04-12T14:00:00Z"
    )


class TestParseUtc:
    def test_offset(self):
        assert parse_utc("2021-04-12T16:00:00+02:00") == datetime.datetime(
            2021, 4, 12, 14, tzinfo=pytz.UTC
        )

    def test_truncates_to_second(self):
        assert parse_utc("2021-04-12T14:00:00.750Z").microsecond == 0

    def test_naive(self):
        with pytest.raises(ValueError):
            parse_utc("2021-04-12T14:00:00")

    def test_invalid(self):
        with pytest.raises(ValueError):
            parse_utc("yesterday")


def test_floor_to():
    date = datetime.datetime(2021, 4, 26, 13, 45, tzinfo=pytz.UTC)

    assert floor_to(date, datetime.timedelta(days=1)) == datetime.datetime(
        2021, 4, 26, tzinfo=pytz.UTC
    )
    assert floor_to(EPOCH, datetime.timedelta(days=7)) == EPOCH


def test_sha256():
    assert sha256("signet") == sha256("signet", 100)
    assert len(sha256("signet")) == 64
    assert len(sha256("signet", 16)) == 16
    assert len(sha256("signet", 0)) == 1


def test_collapse_whitespace():
    text = "  Apple\n\tand   Google "

    assert collapse_whitespace(text) == "Apple and Google"


def test_slugify():
    assert slugify("Société Générale") == "societe-generale"
    assert slugify("AT&T Inc.") == "at-t-inc"
    assert slugify("!!!") == "entity"


def test_format_float():
    assert format_float(-0.8866281) == "-0.886628"
    assert format_float(-0.0000001) == "0.000000"
    assert format_float(0.5, 2) == "0.50"


def test_canonical_json():
    assert canonical_json(
        {"b": 1, "a": [0.5, "é", None, True], "c": {"z": -0.0, "y": "x"}}
    ) == ('{"a":[0.500000,"é",null,true],"b":1,"c":{"y":"x","z":0.000000}}')

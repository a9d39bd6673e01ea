"""
utils provides utility classes and functions
"""

import datetime
import hashlib
import json
import re
import unicodedata
from typing import Annotated, Any

import pytz
from dateutil.parser import isoparse
from pydantic import BeforeValidator, PlainSerializer

UNITS = {
    "ms": "milliseconds",
    "s": "seconds",
    "m": "minutes",
    "h": "hours",
    "d": "days",
    "w": "weeks",
}
DURATION_PART = re.compile(r"(?P<val>\d+(\.\d+)?)(?P<unit>ms|[smhdw])", re.I)
DURATION = re.compile(r"(\d+(\.\d+)?(ms|[smhdw]))+", re.I)

EPOCH = datetime.datetime(1970, 1, 1, tzinfo=pytz.UTC)


class Singleton(type):
    """
    Singleton implements the singleton pattern to be used as a
    metaclass for classes that are singletons
    """

    _instances = {}

    def __call__(cls, *args, **kwargs):
        if cls not in cls._instances:
            cls._instances[cls] = super(Singleton, cls).__call__(
                *args, **kwargs
            )

        return cls._instances[cls]


def parse_timedelta(v: Any) -> datetime.timedelta:
    """
    Parses string to timedelta. Plain numbers are taken as seconds

    :param v: Input time delta
    :return: Timedelta as datetime.timedelta
    :raises ValueError: If part of the input is not a duration
    """
    if isinstance(v, datetime.timedelta):
        return v

    if isinstance(v, (int, float)):
        return datetime.timedelta(seconds=v)

    timedelta = str(v).replace(" ", "")
    if re.fullmatch(r"\d+(\.\d+)?", timedelta):
        return datetime.timedelta(seconds=float(timedelta))
    if not DURATION.fullmatch(timedelta):
        raise ValueError(f"'{v}' is not a duration such as 30d or 1h30m")

    return sum(
        (
            datetime.timedelta(
                **{UNITS[m.group("unit").lower()]: float(m.group("val"))}
            )
            for m in DURATION_PART.finditer(timedelta)
        ),
        datetime.timedelta(0),
    )


def format_timedelta(delta: datetime.timedelta) -> str:
    """
    Formats a timedelta in the compact notation parse_timedelta reads

    :param delta: Delta to format
    :return: Compact representation, such as 30d or 1h30m
    """
    seconds = int(delta.total_seconds())
    parts = []
    for unit, size in (("d", 86400), ("h", 3600), ("m", 60), ("s", 1)):
        if seconds >= size:
            parts.append(f"{seconds // size}{unit}")
            seconds %= size

    return "".join(parts) or "0s"


def format_utc(date: datetime.datetime) -> str:
    """
    Formats date as UTC in ISO8601 format

    :param date: Date to format
    :return: Date in utc
    """
    if date.tzinfo is not None:
        date = date.astimezone(pytz.UTC)

    return date.replace(tzinfo=pytz.UTC).isoformat().replace("+00:00", "Z")


def parse_utc(value: Any) -> datetime.datetime:
    """
    Parses an RFC-3339 timestamp into an aware UTC datetime truncated
    to the second

    :param value: Timestamp string or datetime
    :return: Aware datetime in UTC
    :raises ValueError: If the timestamp has no offset or is invalid
    """
    date = value
    if not isinstance(value, datetime.datetime):
        date = isoparse(str(value))

    if date.tzinfo is None:
        raise ValueError(f"timestamp '{value}' has no UTC offset")

    return date.astimezone(pytz.UTC).replace(microsecond=0)


def floor_to(
    date: datetime.datetime, stride: datetime.timedelta
) -> datetime.datetime:
    """
    Floors a date to a multiple of stride counted from the unix epoch

    :param date: Aware date to floor
    :param stride: Alignment
    :return: Floored aware date
    """
    offset = (date - EPOCH) // stride
    return EPOCH + offset * stride


def sha256(value: str, length: int = 64) -> str:
    """
    Compute sha256 hash
    :param value: Value to hash
    :param length: Length of the output hash
    :return: Hashed value with specified length
    """
    output_length = max(min(length, 64), 1)
    return hashlib.sha256(value.encode("utf-8")).hexdigest()[:output_length]


def collapse_whitespace(value: str) -> str:
    """
    Collapses whitespace runs into single spaces and trims the ends

    :param value: Text to normalize
    :return: Normalized text
    """
    return " ".join(value.split())


def slugify(value: str) -> str:
    """
    Turns a normalized surface into an id matching [a-z0-9-]+

    :param value: Text to slugify
    :return: Slug, or "entity" when nothing survives
    """
    ascii_value = (
        unicodedata.normalize("NFKD", value)
        .encode("ascii", "ignore")
        .decode("ascii")
        .lower()
    )
    return re.sub(r"[^a-z0-9]+", "-", ascii_value).strip("-") or "entity"


def format_float(value: float, places: int = 6) -> str:
    """
    Formats a float at a fixed number of decimal places, never
    emitting a negative zero

    :param value: Value to format
    :param places: Decimal places
    :return: Formatted value
    """
    text = f"{value:.{places}f}"
    if float(text) == 0:
        return f"{0:.{places}f}"

    return text


def canonical_json(value: Any, places: int = 6) -> str:
    """
    Serializes a JSON compatible value with sorted keys, no insignificant
    whitespace and floats at a fixed number of decimal places

    :param value: Value to serialize
    :param places: Decimal places used for floats
    :return: Canonical JSON text
    """
    if isinstance(value, dict):
        items = sorted((str(k), v) for k, v in value.items())
        return (
            "{"
            + ",".join(
                f"{json.dumps(k, ensure_ascii=False)}:"
                f"{canonical_json(v, places)}"
                for k, v in items
            )
            + "}"
        )

    if isinstance(value, (list, tuple)):
        return "[" + ",".join(canonical_json(v, places) for v in value) + "]"

    if isinstance(value, float):
        return format_float(value, places)

    return json.dumps(value, ensure_ascii=False)


UtcDatetime = Annotated[
    datetime.datetime,
    BeforeValidator(parse_utc),
    PlainSerializer(format_utc, return_type=str, when_used="json"),
]

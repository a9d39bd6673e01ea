"""
transport provides the HTTP transport used by the gateway backends,
with exponential backoff and full jitter on transient failures
"""

import datetime
import functools
import random
import time
from typing import Any, Callable, List, Optional, Protocol

import httpx
import wrapt

from signet.core.errors import BackendError
from signet.core.logging import logging
from signet.gateway.gateway_config import BackendConfig

RETRYABLE_STATUS_CODES = {408, 425, 429}


class TransientError(Exception):
    """
    TransientError marks a failure worth retrying
    """


class PermanentError(Exception):
    """
    PermanentError marks a failure that retrying won't fix
    """


class Transport(Protocol):
    """
    Transport sends one JSON request and returns the raw response body
    """

    def post(self, payload: dict) -> bytes:
        """
        Send a request

        :param payload: JSON request body
        :return: Response body
        """


def full_jitter(ceiling: float) -> float:
    """
    Draws a delay uniformly between zero and the ceiling

    :param ceiling: Largest delay, in seconds
    :return: Delay in seconds
    """
    return random.uniform(0.0, ceiling)


class Backoff:
    """
    Backoff computes the delays between attempts. Ceilings grow as
    min(cap, base * 2^(n-1)) and never decrease; the actual delay is drawn
    by the jitter function under the ceiling
    """

    def __init__(
        self,
        base: datetime.timedelta,
        cap: datetime.timedelta,
        jitter: Callable[[float], float] = full_jitter,
    ):
        self.base = base.total_seconds()
        self.cap = cap.total_seconds()
        self.jitter = jitter

    def ceiling(self, retry: int) -> float:
        """
        Get the delay ceiling before a retry

        :param retry: Retry number, starting at 1
        :return: Ceiling in seconds
        """
        return min(self.cap, self.base * (2 ** (retry - 1)))

    def delay(self, retry: int) -> float:
        """
        Get the delay before a retry

        :param retry: Retry number, starting at 1
        :return: Delay in seconds
        """
        ceiling = self.ceiling(retry)
        return max(0.0, min(ceiling, self.jitter(ceiling)))


def retrying(wrapped=None, retryable: tuple = (TransientError,)):
    """
    retrying decorator retries a transport method on transient errors,
    at most config.max_retries times, sleeping with the instance backoff

    :param wrapped: Function wrapped with the decorator
    :param retryable: Exceptions that trigger a retry
    :return: Wrapped function
    """
    if wrapped is None:
        return functools.partial(retrying, retryable=retryable)

    @wrapt.decorator
    def wrapper(wrapped, instance: "HttpTransport", args, kwargs):
        attempt = 0
        while True:
            attempt += 1
            try:
                return wrapped(*args, **kwargs)
            except PermanentError as exc:
                raise BackendError(
                    instance.capability, str(exc), attempt
                ) from exc
            except retryable as exc:
                if attempt > instance.config.max_retries:
                    raise BackendError(
                        instance.capability, str(exc), attempt
                    ) from exc

                delay = instance.backoff.delay(attempt)
                instance.delays.append(delay)
                if instance.on_retry is not None:
                    instance.on_retry(instance.capability)
                logging.warning(
                    "%s request failed (attempt %s/%s): %s, retrying in"
                    " %.3fs",
                    instance.capability,
                    attempt,
                    instance.config.max_retries + 1,
                    exc,
                    delay,
                )
                instance.sleep(delay)

    return wrapper(wrapped)  # pylint: disable=no-value-for-parameter


class HttpTransport:
    """
    HttpTransport POSTs JSON bodies to a backend endpoint
    """

    config: BackendConfig
    capability: str
    client: httpx.Client
    delays: List[float]

    def __init__(
        self,
        config: BackendConfig,
        capability: str,
        client: Optional[httpx.Client] = None,
        sleep: Callable[[float], Any] = time.sleep,
        jitter: Callable[[float], float] = full_jitter,
        on_retry: Optional[Callable[[str], Any]] = None,
    ) -> None:
        """
        Initialize the transport

        :param config: Backend configuration
        :param capability: Capability name, used in errors
        :param client: httpx client to use, mostly for tests
        :param sleep: Sleep function used between attempts
        :param jitter: Jitter function applied under each ceiling
        :param on_retry: Callback invoked on every retry
        """
        self.config = config
        self.capability = capability
        self.client = client or httpx.Client(
            timeout=config.timeout.total_seconds(), follow_redirects=True
        )
        self.sleep = sleep
        self.on_retry = on_retry
        self.backoff = Backoff(config.backoff_base, config.backoff_cap, jitter)
        self.delays = []

    def post(self, payload: dict) -> bytes:
        """
        POST a JSON body to the endpoint

        :param payload: JSON request body
        :return: Response body
        """
        return self.request("POST", json=payload)

    def get(self, params: Optional[dict] = None) -> bytes:
        """
        GET the endpoint

        :param params: Query parameters
        :return: Response body
        """
        return self.request("GET", params=params)

    @retrying
    def request(self, method: str, **kwargs) -> bytes:
        """
        Send a request, retrying transient failures

        :param method: HTTP method
        :param kwargs: Extra arguments for httpx
        :return: Response body
        """
        try:
            response = self.client.request(
                method, self.config.endpoint, **kwargs
            )
        except httpx.TransportError as exc:
            raise TransientError(f"{type(exc).__name__}: {exc}") from exc

        if (
            response.status_code in RETRYABLE_STATUS_CODES
            or response.status_code >= 500
        ):
            raise TransientError(f"HTTP {response.status_code}")

        if response.status_code >= 400:
            raise PermanentError(f"HTTP {response.status_code}")

        return response.content

    def close(self) -> None:
        """
        Close the underlying client
        """
        self.client.close()

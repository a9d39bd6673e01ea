"""
worker_pool provides a central way of running pipeline work on threads
while keeping results in input order
"""

import signal
import threading
from concurrent.futures import ThreadPoolExecutor
from typing import Callable, Generic, List, Optional, Sequence, TypeVar

from signet.core.logging import logging

T = TypeVar("T")
R = TypeVar("R")


class Outcome(Generic[R]):
    """
    Outcome holds either the result or the exception of one item
    """

    __slots__ = ("result", "error")

    def __init__(
        self, result: Optional[R] = None, error: Optional[Exception] = None
    ):
        self.result = result
        self.error = error

    @property
    def ok(self) -> bool:
        """
        True when the item completed without raising
        """
        return self.error is None


class CancelledItem(Exception):
    """
    CancelledItem marks items that never ran because of a shutdown
    """


class WorkerPool:
    """
    A class to run tasks on a bounded thread pool and handle shutdown
    signals. Results are always assembled in input order, regardless of
    completion order
    """

    def __init__(self, max_workers: int = 4, handle_signals: bool = False):
        """
        Initialize the WorkerPool.

        :param max_workers: Maximum number of threads
        :param handle_signals: True to stop on SIGINT/SIGTERM. Only
        possible from the main thread
        """
        if max_workers < 1:
            raise ValueError("max_workers must be at least 1")

        self.max_workers = max_workers
        self.shutdown_event = threading.Event()
        if handle_signals:
            signal.signal(signal.SIGINT, self.__shutdown)
            signal.signal(signal.SIGTERM, self.__shutdown)

    def terminate(self) -> None:
        """
        Signal the pool to stop picking up new items.
        """
        self.shutdown_event.set()

    def __shutdown(
        self, signum: int, frame  # pylint: disable=unused-argument
    ) -> None:
        """
        Handle the shutdown signal.

        :param signum: Signal number
        :param frame: Current stack frame
        """
        logging.info("Received shutdown signal: %s [%s]", signum, frame)
        self.shutdown_event.set()

    def _guarded(self, task: Callable[[T], R], item: T) -> Outcome[R]:
        if self.shutdown_event.is_set():
            return Outcome(error=CancelledItem("shutdown requested"))

        try:
            return Outcome(result=task(item))
        except Exception as exc:  # pylint: disable=broad-exception-caught
            return Outcome(error=exc)

    def map(
        self, task: Callable[[T], R], items: Sequence[T]
    ) -> List[Outcome[R]]:
        """
        Run task over every item and return the outcomes in item order

        :param task: Function applied to each item
        :param items: Items to process
        :return: One outcome per item, in the same order
        """
        if not items:
            return []

        if self.max_workers == 1:
            return [self._guarded(task, item) for item in items]

        logging.debug(
            "Running '%s' over %s item(s) on %s worker(s)",
            getattr(task, "__name__", task),
            len(items),
            self.max_workers,
        )
        with ThreadPoolExecutor(max_workers=self.max_workers) as executor:
            return list(
                executor.map(lambda item: self._guarded(task, item), items)
            )

"""
Performance logging for splurge-geomrep.

Timings are logged, and can also be collected into a ``TimingRecorder`` so a
report can include them on request.

Copyright (c) 2025, Jim Schilling

This module is licensed under the MIT License.
"""

import logging
import threading
import time
from collections.abc import Iterator
from contextlib import contextmanager
from typing import Any

_SLOW_SECONDS: float = 1.0
_NOTABLE_SECONDS: float = 0.1


class PerformanceLogger:
    """Logs durations at a level that grows with the duration."""

    def __init__(self, logger: logging.Logger) -> None:
        self._logger = logger

    def log_timing(self, operation: str, duration: float, **context: Any) -> None:
        """
        Log timing information for an operation.

        Args:
            operation: Name of the operation
            duration: Duration in seconds
            **context: Additional fields appended as ``k=v``
        """
        message = f"Performance: {operation} took {duration:.3f}s"
        if context:
            message += " | " + " | ".join(f"{k}={v}" for k, v in context.items())

        if duration > _SLOW_SECONDS:
            self._logger.warning(message)
        elif duration > _NOTABLE_SECONDS:
            self._logger.info(message)
        else:
            self._logger.debug(message)


class TimingRecorder:
    """Thread-safe record of named durations, kept in insertion order."""

    def __init__(self) -> None:
        self._lock = threading.Lock()
        self._timings: dict[str, float] = {}

    def record(self, name: str, duration: float) -> None:
        with self._lock:
            self._timings[name] = self._timings.get(name, 0.0) + duration

    def as_dict(self) -> dict[str, float]:
        with self._lock:
            return dict(self._timings)

    @property
    def total(self) -> float:
        with self._lock:
            return sum(self._timings.values())


@contextmanager
def performance_context(
    operation: str,
    recorder: TimingRecorder | None = None,
    **context: Any,
) -> Iterator[PerformanceLogger]:
    """
    Time a block, log the duration and optionally record it.

    Args:
        operation: Name of the operation
        recorder: Optional recorder that receives the duration
        **context: Additional fields for the log line
    """
    from splurge_geomrep.logging.core import get_logger

    perf_logger = PerformanceLogger(get_logger())
    start = time.perf_counter()
    try:
        yield perf_logger
    finally:
        duration = time.perf_counter() - start
        perf_logger.log_timing(operation, duration, **context)
        if recorder is not None:
            recorder.record(operation, duration)

"""
Run-scoped logging context.

Every CLI run gets a run id derived from its config hash and seed, so log
lines of reproducible runs correlate across invocations. The id is kept in
thread-local storage; ``RunIdFilter`` stamps it on every record the package
handlers emit.

Copyright (c) 2025, Jim Schilling

This module is licensed under the MIT License.
"""

import hashlib
import logging
import threading
from collections.abc import Iterator
from contextlib import contextmanager

_thread_local = threading.local()

_RUN_ID_LENGTH: int = 12
_NO_RUN_ID: str = "-"


def generate_run_id(config_hash: str, seed: int) -> str:
    """Deterministic run id for a (config, seed) pair."""
    digest = hashlib.sha256(f"{config_hash}:{seed}".encode("utf-8")).hexdigest()
    return digest[:_RUN_ID_LENGTH]


def set_run_id(run_id: str) -> str:
    """Set the run id for the current thread."""
    _thread_local.run_id = run_id
    return run_id


def get_run_id() -> str | None:
    """Run id of the current thread, if any."""
    return getattr(_thread_local, "run_id", None)


def clear_run_id() -> None:
    """Clear the run id for the current thread."""
    if hasattr(_thread_local, "run_id"):
        delattr(_thread_local, "run_id")


@contextmanager
def run_context(run_id: str | None) -> Iterator[str | None]:
    """
    Bind ``run_id`` to the current thread for the duration of the block.

    ``None`` leaves the current binding alone, so worker threads can re-enter
    whatever id their submitter had.
    """
    if run_id is None:
        yield get_run_id()
        return
    previous = get_run_id()
    set_run_id(run_id)
    try:
        yield run_id
    finally:
        if previous is None:
            clear_run_id()
        else:
            set_run_id(previous)


class RunIdFilter(logging.Filter):
    """Set ``record.run_id`` to the current thread's run id, or ``-`` outside a run. Drops nothing."""

    def filter(self, record: logging.LogRecord) -> bool:
        record.run_id = get_run_id() or _NO_RUN_ID
        return True

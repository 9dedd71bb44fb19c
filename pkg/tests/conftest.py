from __future__ import annotations

import time
from functools import lru_cache

import pytest

from pjensen import commands
from pjensen.exact_core import partition_table

ACCEPTANCE_LINES: list[str] = []


@lru_cache(maxsize=None)
def shared_table(max_n: int = 6000):
    return partition_table(max_n)


@lru_cache(maxsize=None)
def timed_find_n(d: int) -> tuple[commands.NdResult, float]:
    """``find-n`` with the default epsilon for ``d``, run once per session."""
    start = time.perf_counter()
    res = commands.cmd_find_N(d, jobs=1)
    return res, time.perf_counter() - start


@lru_cache(maxsize=None)
def timed_chen() -> tuple[commands.ChenReport, float]:
    start = time.perf_counter()
    rep = commands.cmd_chen()
    return rep, time.perf_counter() - start


@pytest.fixture(scope="session")
def table():
    return shared_table()


def record_acceptance(line: str) -> None:
    ACCEPTANCE_LINES.append(line)
    print(line)


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)

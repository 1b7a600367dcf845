"""Shared, lazily-built pipeline stages; heavy objects are computed once."""

from __future__ import annotations

import pytest

import terwilliger as tw
from terwilliger.chars import (
    centralizer_wedderburn,
    char_table,
    multiplicities,
    perm_char_H1,
)
from terwilliger.orbitals import OrbitalIndex
from terwilliger.switching import run_to_stationary
from terwilliger.wedderburn import CpiBuilder, decompose_T, thinness

_CACHE: dict = {}

ACCEPTANCE_RESULTS: dict[str, bool] = {}


def _memo(key, build):
    if key not in _CACHE:
        _CACHE[key] = build()
    return _CACHE[key]


class Stages:
    """Factory handing out cached pipeline stages per symmetric degree."""

    def group(self, n):
        return _memo(("group", n), lambda: tw.build_group(f"sym:{n}"))

    def scheme(self, n):
        return _memo(("scheme", n), lambda: tw.build_scheme(self.group(n)))

    def tensor(self, n):
        return _memo(("tensor", n), lambda: tw.intersection_numbers(self.scheme(n)))

    def orbindex(self, n):
        return _memo(("orbindex", n), lambda: OrbitalIndex(self.scheme(n)))

    def closure(self, n):
        return _memo(
            ("closure", n),
            lambda: run_to_stationary(self.scheme(n), self.orbindex(n), seed=0),
        )

    def chartable(self, n):
        return _memo(("chartable", n), lambda: char_table(n))

    def mults(self, n):
        def build():
            pi = perm_char_H1(self.group(n), self.scheme(n).classes)
            return multiplicities(pi, n)

        return _memo(("mults", n), build)

    def cpis(self, n):
        def build():
            builder = CpiBuilder(self.orbindex(n), self.chartable(n))
            return builder.build_all(self.mults(n))

        return _memo(("cpis", n), build)

    def wedderburn(self, n):
        def build():
            cent = centralizer_wedderburn(self.mults(n))
            return decompose_T(self.closure(n), cent, self.cpis(n))

        return _memo(("wedderburn", n), build)

    def thin(self, n):
        return _memo(("thin", n), lambda: thinness(self.cpis(n), self.orbindex(n)))


@pytest.fixture(scope="session")
def stages() -> Stages:
    return Stages()


Q8_TABLE = """order 8
0 1 2 3 4 5 6 7
1 0 3 2 5 4 7 6
2 3 1 0 6 7 5 4
3 2 0 1 7 6 4 5
4 5 7 6 1 0 2 3
5 4 6 7 0 1 3 2
6 7 4 5 3 2 1 0
7 6 5 4 2 3 0 1
"""

C3_TABLE = """order 3
0 1 2
1 2 0
2 0 1
"""

TRIVIAL_TABLE = """order 1
0
"""


@pytest.fixture(scope="session")
def q8_path(tmp_path_factory):
    p = tmp_path_factory.mktemp("tables") / "q8.txt"
    p.write_text(Q8_TABLE)
    return p


@pytest.fixture(scope="session")
def c3_path(tmp_path_factory):
    p = tmp_path_factory.mktemp("tables") / "c3.txt"
    p.write_text(C3_TABLE)
    return p


@pytest.fixture(scope="session")
def trivial_path(tmp_path_factory):
    p = tmp_path_factory.mktemp("tables") / "triv.txt"
    p.write_text(TRIVIAL_TABLE)
    return p


def record_acceptance(name: str, ok: bool) -> None:
    ACCEPTANCE_RESULTS[name] = ok and ACCEPTANCE_RESULTS.get(name, True)


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for name in sorted(ACCEPTANCE_RESULTS):
        verdict = "PASS" if ACCEPTANCE_RESULTS[name] else "FAIL"
        terminalreporter.write_line(f"{name}: {verdict}")

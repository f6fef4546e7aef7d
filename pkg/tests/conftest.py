from __future__ import annotations

import random
import time

import pytest

from stairpack.geom import Q
from stairpack.packing import PackingInstance, search

CORPUS_KS = (1, 2, 3)
CORPUS_LS = tuple(range(3, 9))
CORPUS_SEEDS = 200
ITER_FACTORS = (2, 5, 10, 20)

_RESULTS: list[str] = []


def corpus_params(seeds: int = CORPUS_SEEDS):
    for k in CORPUS_KS:
        for l in CORPUS_LS:
            for seed in range(seeds):
                rng = random.Random(seed * 1000 + k * 10 + l)
                yield k, l, seed, rng.choice(ITER_FACTORS) * l * l


def build_corpus(seeds: int = CORPUS_SEEDS) -> list[PackingInstance]:
    return [search(k, l, seed, iters) for k, l, seed, iters in corpus_params(seeds)]


@pytest.fixture(scope="session")
def corpus():
    t0 = time.perf_counter()
    insts = build_corpus()
    return insts, time.perf_counter() - t0


@pytest.fixture(scope="session")
def small_corpus():
    """A cheaper slice of the corpus for the non-acceptance tests."""
    return build_corpus(seeds=5)


@pytest.fixture
def two_tri():
    return PackingInstance(1, 2, ((0, 0), (Q(1, 2), Q(1, 2))))


@pytest.fixture
def three_tri():
    return PackingInstance(2, 3, ((0, 0), (Q(1, 4), Q(1, 4)), (Q(1, 2), Q(1, 2))))


@pytest.fixture
def criterion():
    """Record a PASS/FAIL line for an acceptance criterion, then re-raise failures."""

    class Recorder:
        def __call__(self, label: str):
            return _Line(label)

    return Recorder()


class _Line:
    def __init__(self, label: str):
        self.label = label
        self.detail = ""

    def __enter__(self):
        return self

    def __exit__(self, exc_type, exc, tb):
        status = "PASS" if exc_type is None else "FAIL"
        line = f"{status} {self.label}" + (f" [{self.detail}]" if self.detail else "")
        if exc is not None:
            line += f" :: {str(exc).splitlines()[0] if str(exc) else exc_type.__name__}"
        _RESULTS.append(line)
        print(line)
        return False


def pytest_terminal_summary(terminalreporter):
    if _RESULTS:
        terminalreporter.section("acceptance criteria")
        for line in _RESULTS:
            terminalreporter.write_line(line)

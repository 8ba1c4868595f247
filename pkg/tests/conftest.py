import os
import random
from importlib import resources
from pathlib import Path

import pytest

from dpsynth.cnf import SynthesisProblem, random_instance, running_example
from dpsynth.planner import example_tree

SEED = int(os.environ.get("DPSYNTH_SEED", "0"))

CORPUS = Path(str(resources.files("dpsynth") / "corpus"))
FIXTURES = CORPUS / "fixtures"
BENCH = CORPUS / "bench"


def seeded_instances(count: int, salt: int = 0) -> list[SynthesisProblem]:
    """Reproducible random instances; DPSYNTH_SEED shifts the whole stream."""
    rng = random.Random(SEED * 1_000_003 + salt)
    return [random_instance(rng) for _ in range(count)]


def expected_verdict(path: Path) -> str | None:
    for line in path.read_text().splitlines():
        if line.startswith("c expected:"):
            return line.split(":", 1)[1].strip()
    return None


@pytest.fixture
def example():
    return running_example()


@pytest.fixture
def ref_tree():
    return example_tree()


@pytest.fixture
def fixtures_dir():
    return FIXTURES


@pytest.fixture
def bench_dir():
    return BENCH


ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)

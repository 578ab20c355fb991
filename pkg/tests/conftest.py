import sys
from functools import lru_cache
from pathlib import Path

import pytest
from hypothesis import settings

sys.path.insert(0, str(Path(__file__).parent))

from hypnet.cayley import build_ball  # noqa: E402
from hypnet.cones import ConeLanguages, compute_cone_types  # noqa: E402
from hypnet.words import parse_group  # noqa: E402

ACCEPTANCE_LINES = []

# cached fixtures make first calls slow; seeds stay fixed for reproducible runs
settings.register_profile("hypnet", deadline=None, derandomize=True)
settings.load_profile("hypnet")


@lru_cache(maxsize=None)
def group(spec):
    return parse_group(spec)


@lru_cache(maxsize=None)
def ball(spec, R):
    return build_ball(group(spec), R)


@lru_cache(maxsize=None)
def languages(spec, k=2, R=6, D=2):
    return ConeLanguages(compute_cone_types(ball(spec, R), k), D)


@pytest.fixture
def free2():
    return group("free:2")


@pytest.fixture
def free_langs():
    return languages("free:2")


@pytest.fixture
def fpc_langs():
    return languages("fpc:2,3")


def record(criterion, ok, detail=""):
    ACCEPTANCE_LINES.append(f"criterion {criterion:>2}: {'PASS' if ok else 'FAIL'}  {detail}")


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES, key=lambda s: int(s.split(":")[0].split()[1])):
            terminalreporter.write_line(line)

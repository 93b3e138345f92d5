from functools import lru_cache

import numpy as np
import pytest

from gdspec.drg import spectral_polynomials, spectral_table
from gdspec.families import intersection_array, parse_family

TEST_GRAPHS = (
    "cubic:k4", "cubic:utility", "cubic:cube", "cubic:petersen", "cubic:heawood",
    "cubic:pappus", "cubic:desargues", "cubic:dodecahedral", "hamming:4,2", "hamming:3,3",
    "johnson:7,2", "johnson:8,3", "crown:4", "crown:5",
)


@lru_cache(maxsize=None)
def table_for(spec: str, strict: bool = True):
    return spectral_table(intersection_array(parse_family(spec)), strict=strict)


@lru_cache(maxsize=None)
def phi_for(spec: str):
    return spectral_polynomials(table_for(spec))


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


# criterion number -> (passed, detail), filled by test_acceptance
ACCEPTANCE: dict[int, tuple[bool, str]] = {}


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(ACCEPTANCE):
        ok, detail = ACCEPTANCE[n]
        terminalreporter.write_line(f"CRITERION {n}: {'PASS' if ok else 'FAIL'}  {detail}")

import functools
import os
import sys

import pytest

sys.path.insert(0, os.path.dirname(__file__))

from cuntzring import build_ring  # noqa: E402

ROOT = os.path.dirname(os.path.dirname(os.path.abspath(__file__)))
DEFAULT_CFG = os.path.join(ROOT, "configs", "default.cfg")

CORPUS = {
    "z4": "zmod(4)", "z6": "zmod(6)", "z8": "zmod(8)", "z12": "zmod(12)", "z16": "zmod(16)",
    "f2": "gf(2)", "f3": "gf(3)", "m2f2": "matrix(2,gf(2))", "u2z2": "upper(2,zmod(2))",
    "z2xz4": "product(zmod(2),zmod(4))", "even16": "subring_nonunital(zmod(16),{2})",
    "zm4": "zero_mult(4)", "dorroh_even16": "dorroh(subring_nonunital(zmod(16),{2}))",
}


@functools.lru_cache(maxsize=None)
def ring(expr):
    return build_ring(expr)


def corpus():
    return {k: ring(v) for k, v in CORPUS.items()}


def unital_corpus():
    return {k: R for k, R in corpus().items() if R.unit is not None}


@pytest.fixture(scope="session")
def rings():
    return corpus()


ACCEPTANCE = {}


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(ACCEPTANCE):
        ok, detail = ACCEPTANCE[n]
        terminalreporter.write_line(f"criterion {n:2d}: {'PASS' if ok else 'FAIL'}  {detail}")

from __future__ import annotations

import numpy as np
import pytest

from fuzzytsfd import FcmConfig, ruspini_fixture
from fuzzytsfd.datagen import GaussianSpec, gen_e1071, gen_overlapped
from fuzzytsfd.selection import sweep

ACCEPTANCE: dict[str, tuple[bool, str]] = {}


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for key in sorted(ACCEPTANCE, key=lambda s: int(s.split(".")[0])):
        ok, detail = ACCEPTANCE[key]
        terminalreporter.write_line(f"{'PASS' if ok else 'FAIL'}  {key}  {detail}")


@pytest.fixture
def record():
    def _record(key: str, ok: bool, detail: str = "") -> None:
        ACCEPTANCE[key] = (ok, detail)
        print(f"{'PASS' if ok else 'FAIL'}  {key}  {detail}")

    return _record


@pytest.fixture(scope="session")
def ruspini():
    return ruspini_fixture()


@pytest.fixture(scope="session")
def e1071_3():
    return gen_e1071(3, seed=0)


@pytest.fixture(scope="session")
def e1071_3_overlapped():
    return gen_overlapped(GaussianSpec(3, seed=0))


@pytest.fixture(scope="session")
def ruspini_sweep(ruspini):
    return sweep(ruspini, FcmConfig(2, seed=0), 2, 12)


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)

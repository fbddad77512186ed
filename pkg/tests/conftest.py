import os
import sys

import pytest
from hypothesis import HealthCheck, settings

sys.path.insert(0, os.path.dirname(__file__))

from lialgebroid import homology, linalg  # noqa: E402

settings.register_profile(
    "default", max_examples=40, deadline=None,
    suppress_health_check=[HealthCheck.too_slow, HealthCheck.data_too_large])
settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "default"))

RANK_AUDIT = {"matrices": 0, "mismatches": []}
ACCEPTANCE = {}


def _audited_rank(m):
    r = linalg.rank_fraction_free(m)
    RANK_AUDIT["matrices"] += 1
    d = linalg.rank_dense_oracle(m)
    if r != d:
        RANK_AUDIT["mismatches"].append((m.shape, r, d))
    return r


@pytest.fixture(autouse=True)
def audit_ranks(monkeypatch):
    """Every rank taken by a Betti computation is re-derived densely."""
    monkeypatch.setattr(homology, "rank_fraction_free", _audited_rank)
    yield
    assert not RANK_AUDIT["mismatches"], RANK_AUDIT["mismatches"]


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE:
        terminalreporter.section("acceptance criteria")
        for n in sorted(ACCEPTANCE):
            ok, detail = ACCEPTANCE[n]
            terminalreporter.write_line(f"criterion {n:>2}: {'PASS' if ok else 'FAIL'}  {detail}")
    terminalreporter.write_line(
        f"rank audit: {RANK_AUDIT['matrices']} matrices, "
        f"{len(RANK_AUDIT['mismatches'])} sparse/dense mismatches")

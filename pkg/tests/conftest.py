from __future__ import annotations

import numpy as np
import pytest
from hypothesis import HealthCheck, settings
from hypothesis import strategies as st

from qgeom.gf import field_of_order
from qgeom.vecspace import PointSet

settings.register_profile("qgeom", deadline=None, max_examples=40,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("qgeom")

SMALL_ORDERS = (2, 3, 4, 5, 7, 8, 9)


@st.composite
def point_sets(draw, orders=SMALL_ORDERS, max_points=81, dims=(1, 2, 3), nonempty=False):
    q = draw(st.sampled_from(orders))
    n = draw(st.sampled_from([d for d in dims if q**d <= max_points] or [1]))
    N = q**n
    idx = draw(st.sets(st.integers(0, N - 1), min_size=1 if nonempty else 0, max_size=N))
    return PointSet.from_indices(field_of_order(q), n, sorted(idx))


def random_set(q: int, n: int, seed: int, size: int | None = None) -> PointSet:
    rng = np.random.default_rng(seed)
    N = q**n
    size = int(rng.integers(1, N + 1)) if size is None else size
    return PointSet.from_indices(field_of_order(q), n, rng.choice(N, size=size, replace=False))


@pytest.fixture
def F3():
    return field_of_order(3)


@pytest.fixture
def F4():
    return field_of_order(4)


# -- acceptance summary ----------------------------------------------------------

_ACCEPTANCE: dict[int, tuple[str, float]] = {}


def pytest_runtest_logreport(report):
    if report.when != "call" and not (report.when == "setup" and report.failed):
        return
    for key, value in report.user_properties:
        if key == "criterion":
            _ACCEPTANCE[value] = (report.outcome, report.duration)


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for num in sorted(_ACCEPTANCE):
        outcome, secs = _ACCEPTANCE[num]
        verdict = "PASS" if outcome == "passed" else "FAIL"
        terminalreporter.write_line(f"criterion {num:2d}: {verdict} ({secs:.1f} s)")

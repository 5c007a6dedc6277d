from __future__ import annotations

import os
import tempfile

import pytest

# Every test session gets a private exceptions cache, so the bootstrap path is
# exercised and a stale user cache can never leak into results.
os.environ["ORIENT_NT_CACHE"] = os.path.join(tempfile.mkdtemp(prefix="orient_nt_"), "exceptions.cat")

from orient_nt import catalog  # noqa: E402
from orient_nt.census import run_census  # noqa: E402
from orient_nt.plane_graph import build, parse_pg  # noqa: E402

_ACCEPTANCE: dict[int, tuple[str, str, str]] = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "acceptance(number, title): one acceptance criterion")


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    mark = item.get_closest_marker("acceptance")
    if mark is None or rep.when != "call":
        return
    number, title = mark.args
    detail = getattr(item, "acceptance_detail", "")
    _ACCEPTANCE[number] = (title, "PASS" if rep.passed else "FAIL", detail)


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(_ACCEPTANCE):
        title, verdict, detail = _ACCEPTANCE[number]
        line = f"[{verdict}] criterion {number}: {title}"
        terminalreporter.write_line(line + (f" ({detail})" if detail else ""))


@pytest.fixture(scope="session")
def census8():
    """Exact census for n <= 8, shared by every test that needs it."""
    return run_census(8)


@pytest.fixture(scope="session")
def exceptions_catalog(census8):
    entries = catalog.bootstrap(census8)
    catalog.save(entries)
    catalog.default_catalog.cache_clear()
    return catalog.Catalog(entries)


@pytest.fixture(scope="session", autouse=True)
def _seed_cache(exceptions_catalog):
    """Write the cache before anything calls the engine."""
    yield


@pytest.fixture
def record(request):
    """Attach a one-line summary to the acceptance report of the current test."""

    def _record(text: str) -> None:
        request.node.acceptance_detail = text

    return _record


@pytest.fixture
def k4():
    return parse_pg("4\n1: 2 3 4\n2: 1 4 3\n3: 1 2 4\n4: 1 3 2\n")


@pytest.fixture
def tri():
    return build({1: [3, 2], 2: [1, 3], 3: [2, 1]})


@pytest.fixture(scope="session")
def octahedron():
    from orient_nt.generators import enumerate as enumerate_graphs

    return next(g for g in enumerate_graphs(6) if all(g.degree(v) == 4 for v in g.vertices))

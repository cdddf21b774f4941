import os
import time

import pytest

from riccati import classify as cl


@pytest.fixture(scope="session")
def built_catalog(tmp_path_factory):
    """A catalog built from scratch (with the search for missing
    representatives), cached for the session and exported through
    RICCATI_CATALOG so that CLI subprocesses reuse it."""
    path = tmp_path_factory.mktemp("catalog") / "catalog.json"
    t0 = time.monotonic()
    cat = cl.build_catalog()
    elapsed = time.monotonic() - t0
    cat.save(path)
    old = os.environ.get("RICCATI_CATALOG")
    os.environ["RICCATI_CATALOG"] = str(path)
    cl._CATALOG = cat
    yield {"catalog": cat, "path": path, "seconds": elapsed}
    cl._CATALOG = None
    if old is None:
        os.environ.pop("RICCATI_CATALOG", None)
    else:
        os.environ["RICCATI_CATALOG"] = old


@pytest.fixture(scope="session")
def catalog(built_catalog):
    return built_catalog["catalog"]


@pytest.fixture(scope="session")
def catalog_path(built_catalog):
    return built_catalog["path"]


ACCEPTANCE = pytest.StashKey[dict]()


@pytest.fixture
def record(request):
    """``record(n, ok, detail)`` stores the verdict of acceptance criterion ``n``."""
    store = request.config.stash.setdefault(ACCEPTANCE, {})

    def _record(n, ok, detail, findings=()):
        store[n] = (bool(ok), detail, list(findings))
        print(f"criterion {n}: {'PASS' if ok else 'FAIL'} {detail}")
        for f in findings:
            print(f"  finding: {f}")
    return _record


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    store = config.stash.get(ACCEPTANCE, {})
    if not store:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(store):
        ok, detail, findings = store[n]
        terminalreporter.write_line(f"criterion {n:>2}: {'PASS' if ok else 'FAIL'}  {detail}")
        for f in findings:
            terminalreporter.write_line(f"              finding: {f}")

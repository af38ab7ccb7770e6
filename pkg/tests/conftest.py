import os

import pytest

from qkgenus1.engine import Engine, MemoCache


@pytest.fixture(scope="session")
def cache_path(tmp_path_factory):
    return str(tmp_path_factory.mktemp("cache") / "qkgenus1.cache")


@pytest.fixture(scope="session")
def engine(cache_path):
    """Shared engine; the four-point function is built once per session."""
    return Engine(MemoCache(cache_path))


@pytest.fixture(autouse=True)
def _no_env_cache(monkeypatch):
    monkeypatch.delenv("QKGENUS1_CACHE", raising=False)


@pytest.fixture(scope="session")
def acceptance(request):
    """Collects one status line per acceptance criterion for the terminal summary."""
    lines = request.config.__dict__.setdefault("_acceptance_lines", [])

    def report(number, title, ok, detail=""):
        line = f"[{'PASS' if ok else 'FAIL'}] criterion {number:2d}: {title}" + (f" ({detail})" if detail else "")
        print(line)
        lines.append(line)
        return ok

    return report


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    lines = getattr(config, "_acceptance_lines", [])
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in sorted(lines, key=lambda s: int(s.split("criterion")[1].split(":")[0])):
            terminalreporter.write_line(line)

import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from enriques_lattice.config_io import resolve_config  # noqa: E402
from enriques_lattice.curve_config import build_ambient  # noqa: E402

ACCEPTANCE_LINES: list[str] = []


@pytest.fixture(scope="session")
def models():
    out = {}
    for name in ("E8_tilde", "D8_tilde", "E7_tilde", "type_VII"):
        cfg = resolve_config(name)
        out[name] = (cfg, build_ambient(cfg))
    return out


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)

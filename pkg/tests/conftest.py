import sys
from pathlib import Path

from hypothesis import strategies as st

sys.path.insert(0, str(Path(__file__).parent))

from schroeder.core import PartialMap  # noqa: E402


@st.composite
def ls_maps(draw, n=None, max_n=6):
    """Random member of LS_n built point by point from the block constraints."""
    if n is None:
        n = draw(st.integers(0, max_n))
    v, last = [], 1
    for x in range(1, n + 1):
        if draw(st.booleans()):
            last = draw(st.integers(last, x))
            v.append(last)
        else:
            v.append(0)
    return PartialMap(v)


def pytest_terminal_summary(terminalreporter):
    mod = sys.modules.get("test_acceptance")
    if mod is not None and mod.REPORT:
        REPORT = mod.REPORT
        terminalreporter.section("acceptance criteria")
        for key in sorted(REPORT):
            terminalreporter.write_line(REPORT[key])

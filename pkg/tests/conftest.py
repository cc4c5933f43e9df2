from __future__ import annotations

import numpy as np
import pytest

from trailbench.raster import BinaryRaster, ProbRaster, RgbRaster


@pytest.fixture
def rng() -> np.random.Generator:
    return np.random.default_rng(2024)


def random_rgb(rng: np.random.Generator, h: int, w: int) -> RgbRaster:
    return RgbRaster(rng.integers(0, 256, size=(h, w, 3), dtype=np.uint8))


def random_mask(rng: np.random.Generator, h: int, w: int, density: float) -> BinaryRaster:
    return BinaryRaster(rng.random((h, w)) < density)


def random_prob(rng: np.random.Generator, h: int, w: int) -> ProbRaster:
    return ProbRaster(rng.random((h, w)))


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    """One pass/fail line per whole-system check, in execution order."""
    outcomes: dict[str, str] = {}
    for key, label in (("passed", "PASS"), ("failed", "FAIL"), ("error", "FAIL")):
        for report in terminalreporter.stats.get(key, []):
            nodeid = getattr(report, "nodeid", "")
            if "test_acceptance" not in nodeid:
                continue
            if outcomes.get(nodeid) != "FAIL":
                outcomes[nodeid] = label
    if outcomes:
        terminalreporter.write_sep("-", "acceptance checks")
        for nodeid, label in outcomes.items():
            terminalreporter.write_line(f"{label} {nodeid.split('::')[-1]}")

import sys
from pathlib import Path

import numpy as np
import pytest
from hypothesis import HealthCheck, settings
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

sys.path.insert(0, str(Path(__file__).parent))

from knnup import Image, load_image  # noqa: E402

DATA = Path(__file__).parent / "data"

settings.register_profile(
    "default", deadline=None, suppress_health_check=[HealthCheck.too_slow]
)
settings.load_profile("default")


@st.composite
def images(draw, max_side=12, channels=(1, 3), min_side=1):
    h = draw(st.integers(min_side, max_side))
    w = draw(st.integers(min_side, max_side))
    c = draw(st.sampled_from(channels))
    px = draw(arrays(np.uint8, (h, w, c)))
    return Image(px)


@st.composite
def knn_configs(draw, max_factor=4, max_k=6):
    f_y = draw(st.integers(1, max_factor))
    f_x = draw(st.integers(1, max_factor))
    k = draw(st.integers(max(1, max(f_y, f_x) - 1), max(max_k, max(f_y, f_x))))
    return f_y, f_x, k, draw(st.booleans())


def random_image(rng, h, w, c=3) -> Image:
    return Image(rng.integers(0, 256, size=(h, w, c), dtype=np.uint8))


@pytest.fixture
def rng():
    return np.random.default_rng(20231207)


@pytest.fixture(scope="session")
def ideal_fixture():
    return load_image(DATA / "ideal_128.png")


@pytest.fixture(scope="session")
def ramp_fixture():
    return load_image(DATA / "ramp_128.png")


@pytest.fixture(scope="session")
def structured_fixture():
    return load_image(DATA / "structured_64.png")


# acceptance criteria register one line each; printed in the terminal summary
ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_LINES:
        return
    terminalreporter.section("acceptance criteria")
    for line in sorted(ACCEPTANCE_LINES):
        terminalreporter.write_line(line)

from __future__ import annotations

import os
from pathlib import Path

import numpy as np
import pytest
from hypothesis import HealthCheck, settings
from hypothesis import strategies as st

settings.register_profile(
    "default", deadline=None, max_examples=60, suppress_health_check=[HealthCheck.too_slow]
)
settings.register_profile("ci", deadline=None, max_examples=200, suppress_health_check=[HealthCheck.too_slow])
settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "default"))

DATA = Path(__file__).resolve().parent.parent / "data"


@pytest.fixture
def data_dir() -> Path:
    return DATA


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


PRIMES = st.sampled_from([2, 3, 5, 7])


@st.composite
def bars(draw, max_bars: int = 5, low: int = -4, high: int = 8, essential: bool = True):
    """A single-degree barcode as a list of ``(birth, death)`` pairs."""
    n = draw(st.integers(0, max_bars))
    out = []
    for _ in range(n):
        b = draw(st.integers(low, high))
        if essential and draw(st.integers(0, 4)) == 0:
            out.append((b, float("inf")))
        else:
            out.append((b, b + draw(st.integers(1, 6))))
    return out


@st.composite
def filtered_complexes(draw, max_vertices: int = 6, max_dim: int = 2, high: int = 5):
    """Random flag-like complex with monotone integer births, as a births dict."""
    from mvnerve.complex import FilteredComplex
    from mvnerve.random_instances import flag_complex, monotone_births

    seed = draw(st.integers(0, 2**32 - 1))
    r = np.random.default_rng(seed)
    n = draw(st.integers(1, max_vertices))
    simplices = flag_complex(n, float(r.uniform(0.2, 0.9)), max_dim, r)
    return FilteredComplex(monotone_births(simplices, r, 0, high))


ACCEPTANCE: dict[int, str] = {}


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE:
        terminalreporter.section("acceptance criteria")
        for k in sorted(ACCEPTANCE):
            terminalreporter.write_line(ACCEPTANCE[k])

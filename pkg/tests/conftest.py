import numpy as np
import pytest
from hypothesis import strategies as st

from sveirc import ModelParams
from sveirc.model import RATE_FIELDS

# Filled by test_acceptance.py, printed after the run.
ACCEPTANCE_LINES: dict[int, str] = {}


@pytest.fixture
def baseline():
    return ModelParams(
        Lambda=1.0, mu=0.1, beta1=0.03, beta2=0.01, alpha1=0.02, alpha2=0.01,
        gamma=0.1, d=0.05, xi=0.2, sigma=0.2, phi=1.0, p=0.5, eta=0.5,
        omega=0.5, kappa=10.0, n=1,
    )


@pytest.fixture
def rng():
    return np.random.default_rng(20261015)


_rate = st.floats(min_value=-3.0, max_value=1.0).map(lambda e: 10.0 ** e)


@st.composite
def params_strategy(draw, n=None):
    vals = {name: draw(_rate) for name in RATE_FIELDS}
    if vals["beta2"] > vals["beta1"]:
        vals["beta1"], vals["beta2"] = vals["beta2"], vals["beta1"]
    if vals["alpha2"] > vals["alpha1"]:
        vals["alpha1"], vals["alpha2"] = vals["alpha2"], vals["alpha1"]
    vals["p"] = draw(st.floats(min_value=0.05, max_value=0.95))
    vals["n"] = n if n is not None else draw(st.integers(min_value=1, max_value=4))
    return ModelParams(**vals)


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_LINES:
        return
    terminalreporter.section("acceptance criteria")
    for k in sorted(ACCEPTANCE_LINES):
        terminalreporter.write_line(ACCEPTANCE_LINES[k])

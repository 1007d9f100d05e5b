import numpy as np
import pytest
from hypothesis import HealthCheck, settings, strategies as st

settings.register_profile(
    "repo", deadline=None, derandomize=True, max_examples=60, suppress_health_check=[HealthCheck.too_slow]
)
settings.load_profile("repo")


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


def complex_st(max_abs=5.0):
    return st.builds(
        complex,
        st.floats(-max_abs, max_abs, allow_nan=False, allow_infinity=False),
        st.floats(-max_abs, max_abs, allow_nan=False, allow_infinity=False),
    )


def random_symbol(rng, low=2, high=2, scale=1.0):
    from toeplitz_dyn.symbol import LaurentSymbol

    return LaurentSymbol({n: complex(*rng.normal(scale=scale, size=2)) for n in range(-low, high + 1)})


def polar(rng, lo, hi):
    """Complex number with modulus uniform in [lo, hi] and uniform phase."""
    return rng.uniform(lo, hi) * np.exp(1j * rng.uniform(0, 2 * np.pi))


# -- acceptance reporting ------------------------------------------------------------

_CRITERIA: dict[int, tuple[str, str]] = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(number, title): acceptance criterion")


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    mark = item.get_closest_marker("criterion")
    if mark is None:
        return
    num, title = mark.args
    if rep.failed or (rep.when == "call" and num not in _CRITERIA):
        _CRITERIA[num] = (title, "FAIL" if rep.failed else "PASS")


def pytest_terminal_summary(terminalreporter):
    if not _CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for num in sorted(_CRITERIA):
        title, res = _CRITERIA[num]
        terminalreporter.write_line(f"criterion {num:2d}: {res}  {title}")

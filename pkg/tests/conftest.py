import numpy as np
import pytest

from nsfwave.ansatz import CompositeAnsatz
from nsfwave.gas import GasParams, PrimState, WaveStrengths, build_end_states
from nsfwave.profiles.shock import solve_shock_profile


@pytest.fixture(scope="session")
def gas():
    return GasParams()


@pytest.fixture(scope="session")
def plus():
    return PrimState(1.0, 0.0, 1.0)


@pytest.fixture(scope="session")
def ends(gas, plus):
    return build_end_states(gas, plus, WaveStrengths(0.1, 0.1, 0.1))


@pytest.fixture(scope="session")
def shock(gas, ends):
    return solve_shock_profile(gas, ends.starstar, ends.plus, ends.sigma)


@pytest.fixture(scope="session")
def composite(gas, ends):
    return CompositeAnsatz.from_end_states(gas, ends)


@pytest.fixture(scope="session")
def shock_only(gas, plus):
    return CompositeAnsatz.build(gas, plus, WaveStrengths(0.0, 0.0, 0.1))


@pytest.fixture
def rng():
    return np.random.default_rng(42)


# criterion -> {part: (passed, detail, seconds)}
ACCEPTANCE: dict[int, dict[str, tuple[bool, str, float]]] = {}


@pytest.fixture(scope="session")
def acceptance():
    """Record an acceptance outcome; a PASS/FAIL line per criterion is printed at the end."""
    def record(criterion: int, part: str, passed: bool, detail: str, seconds: float):
        ACCEPTANCE.setdefault(criterion, {})[part] = (bool(passed), detail, seconds)
        print(f"criterion {criterion}{part}: {'PASS' if passed else 'FAIL'} {detail}")
    return record


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for crit in sorted(ACCEPTANCE):
        parts = ACCEPTANCE[crit]
        ok = all(p[0] for p in parts.values())
        secs = sum(p[2] for p in parts.values())
        body = "; ".join(f"{k + ' ' if k else ''}{'PASS' if p else 'FAIL'} {d}"
                         for k, (p, d, _) in sorted(parts.items()))
        terminalreporter.write_line(
            f"CRITERION {crit:2d}: {'PASS' if ok else 'FAIL'}  [{body}]  ({secs:.1f} s)")

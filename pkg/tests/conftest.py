import numpy as np
import pytest

from freezethaw import chain, entanglement


def uniform_grid(tau_max, step=0.05):
    return np.arange(int(round(tau_max / step)) + 1) * step


@pytest.fixture(scope="session")
def default_prep():
    return chain.QubitPreparation()


@pytest.fixture(scope="session")
def series_for(default_prep):
    cache = {}

    def build(n, tau_max=None):
        key = (n, tau_max)
        if key not in cache:
            end = tau_max if tau_max is not None else (90.0 if n is None else max(90.0, 4.0 * (n + 2)))
            grid = uniform_grid(end)
            amps = (
                chain.evolve_infinite(default_prep, grid)
                if n is None
                else chain.evolve(chain.ChainConfig(n), default_prep, grid)
            )
            cache[key] = amps, entanglement.entanglement_series(default_prep, amps)
        return cache[key]

    return build


ACCEPTANCE_LINES = []


def record_criterion(number, passed, detail):
    line = f"{'PASS' if passed else 'FAIL'} criterion {number:>2}: {detail}"
    ACCEPTANCE_LINES.append(line)
    print(line)
    return passed


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES, key=lambda s: int(s.split()[2].rstrip(":"))):
            terminalreporter.write_line(line)


def infinite_limit_deviation_mp(n, tau, dps):
    """|c_e^(N)(tau) - J1(2 tau)/tau| in extended precision; c_e is real, sum_k w_k cos(E_k tau)."""
    import mpmath

    with mpmath.workdps(dps):
        m = n + 2
        t = mpmath.mpf(tau)
        ce = mpmath.fsum(
            2 * mpmath.sin(k * mpmath.pi / m) ** 2 / m * mpmath.cos(2 * mpmath.cos(k * mpmath.pi / m) * t)
            for k in range(1, n + 2)
        )
        return abs(ce - mpmath.besselj(1, 2 * t) / t)

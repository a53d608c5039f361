import numpy as np
import pytest

from sastirap.pulses import CorrectionParams, PulseFamily, PulseParams

MHZ = 2 * np.pi

# lines collected by test_acceptance.py, printed after the run
ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)


def gaussian(T=2.0, omega0_mhz=2.0):
    return PulseParams(PulseFamily.GAUSSIAN, omega0_mhz * MHZ, T,
                       sigma=T / 6, delta_t=T / 10)


def exponential(T=2.0, omega0_mhz=1.2):
    return PulseParams(PulseFamily.EXPONENTIAL, omega0_mhz * MHZ, T,
                       sigma=T / 15)


def trigonometric(T=2.0, omega0_mhz=0.5):
    return PulseParams(PulseFamily.TRIGONOMETRIC, omega0_mhz * MHZ, T)


# parameter sets used for the three pulse figures
REFERENCE_SETS = {
    "gaussian": (gaussian(), CorrectionParams(3 * MHZ)),
    "exponential": (exponential(), CorrectionParams(3 * MHZ)),
    "trigonometric": (trigonometric(), CorrectionParams(20 * MHZ)),
}


@pytest.fixture(params=sorted(REFERENCE_SETS))
def ref_set(request):
    return REFERENCE_SETS[request.param]


# the long runs are shared between the experiment and acceptance tests

@pytest.fixture(scope="session")
def gaussian_sweep():
    from sastirap.experiments import ScenarioSpec, run_scenario
    p, corr = REFERENCE_SETS["gaussian"]
    return run_scenario(ScenarioSpec("sweep", p, corr))


@pytest.fixture(scope="session")
def robustness_grid():
    from sastirap.experiments import ScenarioSpec, run_scenario
    p, corr = REFERENCE_SETS["gaussian"]
    return run_scenario(ScenarioSpec("grid", p, corr))

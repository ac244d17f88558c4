"""Shared fixtures. Heavy runs are session-scoped and timed once."""

import time
from importlib import resources

import pytest

from neonfilm import (default_config, load_campaign, load_scenario,
                      run_campaign, run_scenario)


def bundled_path(name: str) -> str:
    return str(resources.files("neonfilm") / "scenarios" / f"{name}.json")


def _timed_run(name: str):
    scenario = load_scenario(bundled_path(name))
    t0 = time.perf_counter()
    result = run_scenario(scenario)
    return result, time.perf_counter() - t0


@pytest.fixture(scope="session")
def cfg():
    return default_config()


@pytest.fixture(scope="session")
def liquid_timed():
    return _timed_run("liquid_route")


@pytest.fixture(scope="session")
def solid_timed():
    return _timed_run("solid_route")


@pytest.fixture(scope="session")
def liquid_run(liquid_timed):
    return liquid_timed[0]


@pytest.fixture(scope="session")
def solid_run(solid_timed):
    return solid_timed[0]


@pytest.fixture(scope="session")
def quench_run():
    return _timed_run("quench_1sccm")[0]


@pytest.fixture(scope="session")
def relaxation_run():
    return _timed_run("relaxation_step")[0]


@pytest.fixture(scope="session")
def campaign_runs():
    """Main stochastic campaign, serial and with 8 workers, both timed."""
    campaign = load_campaign(bundled_path("campaign_stochastic"))
    t0 = time.perf_counter()
    serial = run_campaign(campaign, jobs=1)
    t_serial = time.perf_counter() - t0
    t0 = time.perf_counter()
    parallel = run_campaign(campaign, jobs=8)
    t_parallel = time.perf_counter() - t0
    return {"serial": serial, "parallel": parallel,
            "t_serial": t_serial, "t_parallel": t_parallel}


@pytest.fixture(scope="session")
def power_high_events():
    return run_campaign(load_campaign(bundled_path("campaign_power_high")), jobs=1)


@pytest.fixture(scope="session")
def power_low_events():
    return run_campaign(load_campaign(bundled_path("campaign_power_low")), jobs=1)

from dataclasses import replace

import pytest

from alarmtaxis import EnergyKind, load_config, simulate
from alarmtaxis.io import config_path

ENERGY_FOR = {"5.1": "e1", "5.2": "e2", "5.3": "e3", "5.4": "e4"}


def pytest_addoption(parser):
    parser.addoption("--runslow", action="store_true", default=False, help="run full-resolution simulations")


def pytest_collection_modifyitems(config, items):
    if config.getoption("--runslow"):
        return
    skip = pytest.mark.skip(reason="full-resolution run; use --runslow")
    for item in items:
        if "slow" in item.keywords:
            item.add_marker(skip)


def example_config(example, **overrides):
    cfg = load_config(config_path("example" + example.replace(".", "_")))
    return replace(cfg, **overrides) if overrides else cfg


class RunCache:
    """Simulations shared by every test module; each one runs at most once."""

    def __init__(self):
        self._runs = {}

    def get(self, example, nodes=52, ndim=2, **overrides):
        key = (example, nodes, ndim, tuple(sorted(overrides.items())))
        if key not in self._runs:
            cfg = example_config(example, nodes=nodes, ndim=ndim, **overrides)
            kind = EnergyKind.for_params(ENERGY_FOR[example], cfg.params)
            self._runs[key] = (cfg, kind, simulate(cfg, energy_kind=kind))
        return self._runs[key]


@pytest.fixture(scope="session")
def runs():
    return RunCache()


def pytest_terminal_summary(terminalreporter):
    import sys
    module = sys.modules.get("test_acceptance")
    results = getattr(module, "RESULTS", None)
    if results:
        terminalreporter.section("acceptance criteria")
        for key in sorted(results, key=lambda k: (int(k.rstrip("f")), k)):
            terminalreporter.write_line(results[key])

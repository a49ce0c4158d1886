"""Shared fixtures: scenario runs are expensive, so trajectories and
cross-check reports are computed once per session and shared."""

import pytest

from degenlog.scenarios import (cross_check, predict, registry, run_scenario,
                                scenario_grid)


class ScenarioCache:
    """Lazily computed (scenario, grid, trajectory, checks, report) per label."""

    def __init__(self):
        self._reg = registry()
        self._data = {}

    @property
    def labels(self):
        return list(self._reg)

    def scenario(self, label):
        return self._reg[label]

    def entry(self, label):
        if label not in self._data:
            s = self._reg[label]
            grid = scenario_grid(s)
            checks = predict(s, grid)
            tr = run_scenario(s, grid)
            rep = cross_check(s, tr, grid, checks=checks)
            self._data[label] = {"scenario": s, "grid": grid, "checks": checks,
                                 "trajectory": tr, "report": rep}
        return self._data[label]

    def trajectory(self, label):
        return self.entry(label)["trajectory"]

    def report(self, label):
        return self.entry(label)["report"]

    def checks(self, label):
        return self.entry(label)["checks"]

    def grid(self, label):
        return self.entry(label)["grid"]


@pytest.fixture(scope="session")
def cache():
    return ScenarioCache()

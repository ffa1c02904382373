from embedkit.sim.closedloop import ClosedLoop, simulate
from embedkit.sim.formatter import ScenarioFormatter
from embedkit.sim.record import RunRecord, RunRow
from embedkit.sim.scenario import MatrixSpec, Scenario

__all__ = [
    "ClosedLoop",
    "MatrixSpec",
    "RunRecord",
    "RunRow",
    "Scenario",
    "ScenarioFormatter",
    "simulate",
]

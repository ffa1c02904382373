from pathlib import Path

import pytest

from embedkit.error import ConfigError
from embedkit.sim import MatrixSpec, Scenario, ScenarioFormatter
from embedkit.sim.formatter import DataclassFormatter
from embedkit.testing import FakeScenario


def test_should_read_shipped_paper_scenario() -> None:
    path = Path(__file__).parents[2] / "scenarios" / "paper.toml"

    scenario = ScenarioFormatter().read(path)

    assert scenario == Scenario.paper()


def test_should_load_what_it_writes(tmp_path: Path) -> None:
    scenario = FakeScenario().entity()
    path = tmp_path / "scenario.toml"

    ScenarioFormatter().write(scenario, path)

    assert ScenarioFormatter().read(path) == scenario


def test_should_fill_defaults_for_missing_sections() -> None:
    scenario = ScenarioFormatter().loads('[observer]\nkind = "nonkalman"\n')

    assert scenario == Scenario.paper().with_observer("nonkalman")


def test_should_accept_integers_for_numbers() -> None:
    scenario = ScenarioFormatter().loads("[controller]\nk_p = 2\n")

    assert scenario.controller.k_p == 2.0
    assert isinstance(scenario.controller.k_p, float)


def test_should_load_diagonal_spec() -> None:
    text = "[observer]\nq = { diag = [1.0, 2.0, 3.0, 4.0, 5.0, 6.0] }\n"

    scenario = ScenarioFormatter().loads(text)

    assert scenario.observer.q == MatrixSpec(diag=[1.0, 2.0, 3.0, 4.0, 5.0, 6.0])


def test_should_report_unknown_keys_with_paths() -> None:
    text = "[plant]\nmass = 1.0\n\n[controller]\nk_d = { scalar = 1.0 }\n"

    with pytest.raises(ConfigError) as error:
        ScenarioFormatter().loads(text, "bad.toml")

    assert error.value.issues == [
        ("plant.mass", "unknown key"),
        ("controller.k_d.scalar", "unknown key"),
    ]
    assert str(error.value).startswith("bad.toml: invalid configuration")


def test_should_report_mistyped_values() -> None:
    text = '[plant]\nk_e = "one"\n\n[simulation]\nabort_on_domain_exit = 1\n'

    with pytest.raises(ConfigError) as error:
        ScenarioFormatter().loads(text)

    assert error.value.issues == [
        ("plant.k_e", "expected a number"),
        ("simulation.abort_on_domain_exit", "expected true or false"),
    ]


def test_should_report_mistyped_array_entries() -> None:
    with pytest.raises(ConfigError) as error:
        ScenarioFormatter().loads('[plant]\ninertia_diag = [3.0, "x", 1.0]\n')

    assert error.value.issues == [("plant.inertia_diag[1]", "expected a number")]


def test_should_report_scalar_where_table_expected() -> None:
    with pytest.raises(ConfigError) as error:
        ScenarioFormatter().loads("plant = 3\n")

    assert error.value.issues == [("plant", "expected a table")]


def test_should_validate_after_loading() -> None:
    with pytest.raises(ConfigError) as error:
        ScenarioFormatter().loads("[plant]\nk_e = -1.0\n")

    assert error.value.issues == [("plant.k_e", "must be positive")]


def test_should_wrap_toml_syntax_errors() -> None:
    with pytest.raises(ConfigError) as error:
        ScenarioFormatter().loads("[plant\n", "broken.toml")

    assert str(error.value).startswith("broken.toml: ")


def test_should_report_missing_file(tmp_path: Path) -> None:
    with pytest.raises(ConfigError):
        ScenarioFormatter().read(tmp_path / "absent.toml")


def test_should_drop_absent_optionals_when_dumping() -> None:
    raw = DataclassFormatter(Scenario).dump(Scenario.paper())

    assert "matrix" not in raw["initial"]
    assert raw["controller"]["k_d"] == {"scalar_times_identity": 4.0}


def test_should_write_matrix_specs_as_subtables() -> None:
    m1 = MatrixSpec(diag=[2.0, 2.0, 2.0])
    scenario = Scenario.paper().with_observer("nonkalman", m1=m1)

    text = ScenarioFormatter().dumps(scenario)

    assert "[observer.m1]\ndiag = [\n    2.0,\n    2.0,\n    2.0,\n]\n" in text
    assert "[controller.k_d]\nscalar_times_identity = 4.0\n" in text


def test_should_report_ragged_gain_matrix() -> None:
    text = "[controller]\nk_d = { matrix = [[4.0, 0.0, 0.0], [0.0, 4.0], [0.0]] }\n"

    with pytest.raises(ConfigError) as error:
        ScenarioFormatter().loads(text)

    assert error.value.issues == [("controller.k_d.matrix", "expected a 3x3 matrix")]


def test_should_report_ragged_initial_attitude() -> None:
    text = "[initial]\nmatrix = [[1.0, 0.0, 0.0], [0.0, 1.0], [0.0, 0.0, 1.0]]\n"

    with pytest.raises(ConfigError) as error:
        ScenarioFormatter().loads(text)

    assert error.value.issues == [("initial.matrix", "expected a 3x3 matrix")]

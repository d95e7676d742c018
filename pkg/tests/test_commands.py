"""
Test command dispatch.

These tests ensure that:
1. Every documented command is registered exactly once
2. run_command dispatches the example jobs to the right checks
3. Tolerance and seed precedence follow settings < job < command line
4. Missing job fields and non-abelian groups are configuration errors
5. Runtime precondition failures surface as exceptions with reports attached
"""

import json

import numpy as np
import pytest

from conftest import CONFIGS_DIR
from gsframes.commands import (
    RUNTIME_ERRORS,
    UnknownCommand,
    get_command,
    list_commands,
    resolve_seed,
    resolve_tolerances,
    run_command,
)
from gsframes.gabor import NotAFrame, VanishingPairing
from gsframes.job_config import ConfigValidationError, load_job, parse_config
from gsframes.pusf import NotInCommutant, NotIsometry, PreconditionFailed
from gsframes.reporting import Verdict, exit_status

COMMANDS = [
    "adjoint-lattice", "character-orthogonality", "check-groupframe", "check-pusf", "commutation-theorem",
    "frame-check", "gabor-dual", "group-info", "hs-onb", "inversion", "janssen", "moyal", "orbit-pair",
    "phi-isomorphism", "ron-shen", "tf-commutation", "wexler-raz",
]


def job(**fields):
    document = {"group": {"abelian": [2]}, "command": "moyal"}
    document.update(fields)
    return parse_config(json.dumps(document))


def run_example(name, **kwargs):
    return run_command(load_job(CONFIGS_DIR / name), **kwargs)


class TestRegistry:
    """Test the command table."""

    def test_all_commands_registered(self):
        assert [c.name for c in list_commands()] == COMMANDS

    def test_every_command_has_a_description(self):
        for cmd in list_commands():
            assert cmd.description
            assert callable(cmd.function)

    def test_unknown_command(self):
        with pytest.raises(UnknownCommand) as exc_info:
            get_command("fourier")
        assert exc_info.value.name == "fourier"
        with pytest.raises(UnknownCommand):
            run_command(job(command="fourier"))

    def test_runtime_errors_cover_preconditions(self):
        for error in (PreconditionFailed, NotInCommutant, NotIsometry, NotAFrame, VanishingPairing):
            assert error in RUNTIME_ERRORS


class TestExampleJobs:
    """Test the shipped example configs."""

    def test_moyal_standard_pair(self):
        reports = run_example("z2_moyal.json")
        assert len(reports) == 1
        assert reports[0].verdict is Verdict.PASS
        assert reports[0].details["scalar"] == pytest.approx(2.0)

    def test_wexler_raz_normalized_pair(self):
        report = run_example("z2_wexler_raz.json")[0]
        assert report.verdict is Verdict.PASS
        assert report.details["wexler_raz_holds"] is True
        assert report.details["frame_operator_is_identity"] is True
        assert len(report.details["pairings"]) == 1

    def test_commutation_theorem_on_s3(self):
        report = run_example("s3_commutation.json")[0]
        assert report.verdict is Verdict.PASS
        for key in ["dim_lambda_commutant", "dim_rho_commutant",
                    "dim_lambda_double_commutant", "dim_rho_double_commutant"]:
            assert report.details[key] == 6

    def test_adjoint_lattice_with_matrix_cross_check(self):
        report = run_example("z4_adjoint_lattice.json", verify_adjoint_by_matrices=True)[0]
        assert report.verdict is Verdict.PASS
        assert report.details["matches_matrix_commutation"] is True
        assert report.details["adjoint"] == report.details["lattice"]

    def test_orbit_pair(self):
        report = run_example("z4_orbit_pair.json")[0]
        assert report.check == "orbit-pair"
        assert report.verdict is Verdict.PASS
        assert report.details["operator"] == "left-regular"
        assert np.allclose(report.details["tau_e"], [0, 1, 0, 0])

    def test_janssen_seeded(self):
        reports = run_example("z3_janssen_random.json")
        assert reports[0].verdict is Verdict.PASS
        assert reports[0].provenance["seed"] == 7

    def test_provenance(self):
        report = run_example("z2_moyal.json")[0]
        assert report.provenance["command"] == "moyal"
        assert report.provenance["group"] == "Z_2"
        assert report.provenance["order"] == 2
        assert report.provenance["seed"] == 0
        assert report.provenance["tolerances"]["residual"] == 1e-9


class TestDispatch:
    """Test individual commands through run_command."""

    @pytest.mark.parametrize("command", ["group-info", "character-orthogonality", "tf-commutation", "hs-onb",
                                         "commutation-theorem", "phi-isomorphism"])
    def test_group_level_commands(self, command):
        reports = run_command(job(command=command, group={"abelian": [2, 2]}))
        assert exit_status(reports) == 0

    def test_check_pusf_standard(self):
        reports = run_command(job(command="check-pusf", pair="standard", p=3,
                                  ambient={"norm": "coordinate"}))
        assert [r.check for r in reports] == ["p-usf", "factorization"]
        assert exit_status(reports) == 0

    def test_check_pusf_explicit_frame_fails_isometry(self):
        frame = {"functionals": [[[1, 0], [1, 0]], [[1, 0], [-1, 0]]],
                 "vectors": [[[0.5, 0], [0.5, 0]], [[0.5, 0], [-0.5, 0]]]}
        reports = run_command(job(command="check-pusf", frame=frame, ambient={"norm": "coordinate"}))
        assert reports[0].verdict is Verdict.FAIL
        assert reports[0].details["isometry"] is False
        assert exit_status(reports) == 1

    def test_check_groupframe_full_chain(self):
        reports = run_command(job(command="check-groupframe", group={"symmetric": 3}, pair="seeded-random:3"))
        assert [r.check for r in reports] == ["p-usf", "shift-invariance", "gramian-left-regular",
                                              "representation", "intertwining", "gramian-right-regular",
                                              "regeneration"]
        assert exit_status(reports) == 0

    def test_check_groupframe_stops_on_non_group_matrix(self):
        frame = {"functionals": [[[1, 0]], [[0, 0]]], "vectors": [[[1, 0]], [[0, 0]]]}
        reports = run_command(job(command="check-groupframe", frame=frame))
        assert [r.check for r in reports] == ["p-usf", "shift-invariance", "gramian-left-regular"]
        assert reports[1].verdict is Verdict.FAIL

    def test_gabor_commands_on_full_lattice(self):
        for command in ["frame-check", "gabor-dual", "janssen", "ron-shen"]:
            reports = run_command(job(command=command, pair="seeded-random:1"))
            assert exit_status(reports) == 0, command

    def test_inversion(self):
        reports = run_command(job(command="inversion", pair="standard", x=[[1, 0], [2, -1]]))
        assert reports[0].verdict is Verdict.PASS

    def test_frame_check_on_trivial_lattice_fails(self):
        reports = run_command(job(group={"abelian": [3]}, command="frame-check", pair="seeded-random:2",
                                  lattice={"generators": []}))
        assert reports[0].verdict is Verdict.FAIL
        assert exit_status(reports) == 1


class TestPrecedence:
    """Test tolerance and seed resolution."""

    def test_tolerance_defaults(self):
        tol = resolve_tolerances(job())
        assert tol.residual == 1e-9 and tol.exact == 1e-12

    def test_job_tolerance_then_command_line(self):
        cfg = job(tolerance={"residual": 1e-6, "invertibility": 1e-3})
        tol = resolve_tolerances(cfg)
        assert tol.residual == 1e-6 and tol.invertibility == 1e-3
        tol = resolve_tolerances(cfg, tolerance=1e-4)
        assert tol.residual == 1e-4 and tol.exact == 1e-4 and tol.invertibility == 1e-3

    def test_seed_order(self):
        assert resolve_seed(job()) == 0
        assert resolve_seed(job(seed=5)) == 5
        assert resolve_seed(job(seed=5, pair="seeded-random:9")) == 9
        assert resolve_seed(job(seed=5, pair="seeded-random:9"), seed=11) == 11

    def test_command_line_seed_changes_random_pair(self):
        cfg = job(command="moyal", pair="seeded-random:1")
        a = run_command(cfg)[0].details["pairing"]
        b = run_command(cfg, seed=2)[0].details["pairing"]
        assert a != b
        assert run_command(cfg, seed=1)[0].details["pairing"] == a


class TestConfigurationErrors:
    """Test jobs that parse but cannot run."""

    def test_missing_pair(self):
        with pytest.raises(ConfigValidationError) as exc_info:
            run_command(job(command="moyal"))
        assert exc_info.value.field == "pair"

    def test_non_abelian_group_for_gabor_command(self):
        with pytest.raises(ConfigValidationError) as exc_info:
            run_command(job(command="moyal", group={"symmetric": 3}, pair="standard"))
        assert exc_info.value.field == "group"

    @pytest.mark.parametrize("command,field", [("inversion", "x"), ("orbit-pair", "orbit")])
    def test_missing_fields(self, command, field):
        with pytest.raises(ConfigValidationError) as exc_info:
            run_command(job(command=command, pair="standard"))
        assert exc_info.value.field == field

    def test_orbit_matrix_wrong_size(self):
        matrix = [[[1, 0], [0, 0], [0, 0]], [[0, 0], [1, 0], [0, 0]], [[0, 0], [0, 0], [1, 0]]]
        with pytest.raises(ConfigValidationError):
            run_command(job(command="orbit-pair", pair="standard", orbit={"operator": {"matrix": matrix}}))

    def test_frame_dimension_exceeding_order(self):
        with pytest.raises(ConfigValidationError):
            job(command="check-pusf", frame={"functionals": [[[1, 0]] * 3] * 2, "vectors": [[[1, 0]] * 3] * 2})


class TestRuntimeErrors:
    """Test precondition failures raised while running."""

    def test_vanishing_pairing(self):
        with pytest.raises(VanishingPairing):
            run_command(job(command="inversion", pair={"f": [[1, 0], [0, 0]], "tau": [[0, 0], [1, 0]]},
                            x=[[1, 0], [0, 0]]))

    def test_not_a_frame(self):
        with pytest.raises(NotAFrame):
            run_command(job(command="ron-shen", pair={"f": [[1, 0], [0, 0]], "tau": [[0, 0], [1, 0]]}))

    def test_orbit_operator_not_in_commutant(self):
        with pytest.raises(NotInCommutant):
            run_command(job(command="orbit-pair", group={"symmetric": 3}, pair="standard",
                            orbit={"operator": {"left-regular": 1}}))

    def test_orbit_operator_not_isometric(self):
        with pytest.raises(NotIsometry):
            run_command(job(command="orbit-pair", pair="standard", orbit={"operator": {"scalar": [2, 0]}}))

    def test_orbit_on_non_group_frame(self):
        frame = {"functionals": [[[1, 0]], [[0, 0]]], "vectors": [[[1, 0]], [[0, 0]]]}
        with pytest.raises(PreconditionFailed) as exc_info:
            run_command(job(command="orbit-pair", frame=frame, orbit={"operator": {"scalar": [1, 0]}}))
        assert exc_info.value.report.check == "shift-invariance"

"""
Test job document parsing.

These tests ensure that:
1. Valid documents become JobConfig objects with groups built and arrays converted
2. Malformed JSON and invalid UTF-8 raise ParseError with a position
3. Schema violations raise ConfigValidationError naming the field
4. Group axioms, coefficient lengths and indices are validated semantically
5. The example configs shipped with the project all parse
"""

import json
import tempfile
from pathlib import Path

import numpy as np
import pytest

from conftest import CONFIGS_DIR
from gsframes.job_config import (
    SCHEMA_VERSION,
    ConfigValidationError,
    JobConfig,
    ParseError,
    load_job,
    load_schema,
    parse_config,
)

MOYAL_JOB = '{"group":{"abelian":[2]},"command":"moyal","pair":{"f":[[1,0],[0,0]],"tau":[[1,0],[0,0]]}}'

NON_ASSOCIATIVE = [
    [0, 1, 2, 3, 4],
    [1, 0, 3, 4, 2],
    [2, 4, 0, 1, 3],
    [3, 2, 4, 0, 1],
    [4, 3, 1, 2, 0],
]


def job(**fields):
    document = {"group": {"abelian": [2]}, "command": "moyal"}
    document.update(fields)
    return json.dumps(document)


class TestValidDocuments:
    """Test successful parsing."""

    def test_moyal_job(self):
        cfg = parse_config(MOYAL_JOB)
        assert isinstance(cfg, JobConfig)
        assert cfg.command == "moyal"
        assert cfg.group.order == 2
        assert np.array_equal(cfg.pair["f"], [1, 0])
        assert cfg.pair["tau"].dtype == complex

    def test_bytes_input_with_bom(self):
        cfg = parse_config(("\ufeff" + MOYAL_JOB).encode("utf-8"))
        assert cfg.group.order == 2

    def test_defaults(self):
        cfg = parse_config(job())
        assert cfg.p == 2.0
        assert cfg.ambient == {}
        assert cfg.lattice is None
        assert cfg.pair is None
        assert cfg.tolerance == {}
        assert cfg.seed is None

    def test_table_group(self):
        cfg = parse_config(json.dumps({"group": {"table": [[0, 1, 2], [1, 2, 0], [2, 0, 1]], "label": "C3"},
                                       "command": "group-info"}))
        assert cfg.group.order == 3
        assert cfg.group.describe() == "C3"

    def test_symmetric_group_with_label(self):
        cfg = parse_config(json.dumps({"group": {"symmetric": 3, "label": "S3 table"}, "command": "group-info"}))
        assert cfg.group.order == 6
        assert cfg.group.describe() == "S3 table"

    def test_integral_floats_are_accepted(self):
        cfg = parse_config(job(group={"abelian": [4.0]}, lattice={"generators": [[2.0, 0]]}, seed=3.0))
        assert cfg.group.order == 4
        assert cfg.lattice == [(2, 0)]
        assert cfg.seed == 3
        assert isinstance(cfg.seed, int)

    def test_pair_presets(self):
        assert parse_config(job(pair="standard")).pair == "standard"
        cfg = parse_config(job(pair="seeded-random:42"))
        assert cfg.pair_seed == 42
        assert parse_config(job(pair="standard")).pair_seed is None

    def test_tolerance_number_sets_residual_and_exact(self):
        cfg = parse_config(job(tolerance=1e-6))
        assert cfg.tolerance == {"residual": 1e-6, "exact": 1e-6}

    def test_tolerance_object(self):
        cfg = parse_config(job(tolerance={"invertibility": 1e-4}))
        assert cfg.tolerance == {"invertibility": 1e-4}

    def test_orbit_operators(self):
        cfg = parse_config(job(group={"abelian": [4]}, orbit={"operator": {"left-regular": 1}}))
        assert cfg.orbit == {"kind": "left-regular", "value": 1, "mode": "commutant"}
        cfg = parse_config(job(orbit={"operator": {"scalar": [0, 1]}, "mode": "double-commutant"}))
        assert cfg.orbit["value"] == 1j
        assert cfg.orbit["mode"] == "double-commutant"
        cfg = parse_config(job(orbit={"operator": {"matrix": [[[1, 0], [0, 0]], [[0, 0], [1, 0]]]}}))
        assert np.array_equal(cfg.orbit["value"], np.eye(2))

    def test_frame_families(self):
        cfg = parse_config(job(frame={"functionals": [[[1, 0]], [[1, 0]]], "vectors": [[[0.5, 0]], [[0.5, 0]]]}))
        assert cfg.frame["functionals"].shape == (2, 1)

    def test_x_vector(self):
        cfg = parse_config(job(x=[[1, 0], [0, 1]]))
        assert np.array_equal(cfg.x, [1, 1j])

    @pytest.mark.parametrize("path", sorted(CONFIGS_DIR.glob("*.json")), ids=lambda p: p.name)
    def test_example_configs_parse(self, path):
        assert isinstance(load_job(path), JobConfig)


class TestParseErrors:
    """Test decoding failures."""

    def test_truncated_json(self):
        with pytest.raises(ParseError) as exc_info:
            parse_config('{"group": {"abelian": [2]},\n "command": ')
        assert exc_info.value.line == 2
        assert "position" in str(exc_info.value)

    def test_invalid_utf8(self):
        with pytest.raises(ParseError) as exc_info:
            parse_config(b'{"command": "\xff"}')
        assert exc_info.value.position == 13

    def test_non_finite_numbers(self):
        with pytest.raises(ParseError):
            parse_config('{"group": {"abelian": [2]}, "command": "moyal", "p": NaN}')


class TestValidationErrors:
    """Test schema and semantic validation."""

    @pytest.mark.parametrize("document,field", [
        ('{"command": "moyal"}', "<document>"),
        (job(extra=1), "<document>"),
        (job(group={"abelian": [0]}), "group.abelian[0]"),
        (job(group={"abelian": [2], "table": [[0]]}), "group"),
        (job(p=0.5), "p"),
        (job(pair="random"), "pair"),
        (job(pair={"f": [[1, 0, 0]], "tau": [[1, 0]]}), "pair"),
        (job(ambient={"norm": "sup"}), "ambient.norm"),
        (job(orbit={"operator": {"scalar": [1, 0], "left-regular": 0}}), "orbit.operator"),
    ])
    def test_schema_violations(self, document, field):
        with pytest.raises(ConfigValidationError) as exc_info:
            parse_config(document)
        assert exc_info.value.field.startswith(field)

    def test_associativity_failure_names_triple(self):
        with pytest.raises(ConfigValidationError) as exc_info:
            parse_config(json.dumps({"group": {"table": NON_ASSOCIATIVE}, "command": "group-info"}))
        error = exc_info.value
        assert error.field == "group.table"
        assert "associativity witness (" in error.reason

    def test_lattice_index_out_of_range(self):
        with pytest.raises(ConfigValidationError) as exc_info:
            parse_config(job(lattice={"generators": [[0, 2]]}))
        assert exc_info.value.field == "lattice.generators[0]"

    def test_pair_length(self):
        with pytest.raises(ConfigValidationError) as exc_info:
            parse_config(job(pair={"f": [[1, 0]], "tau": [[1, 0], [0, 0]]}))
        assert exc_info.value.field == "pair.f"

    def test_orbit_index_out_of_range(self):
        with pytest.raises(ConfigValidationError):
            parse_config(job(orbit={"operator": {"right-regular": 5}}))

    def test_orbit_matrix_not_square(self):
        with pytest.raises(ConfigValidationError) as exc_info:
            parse_config(job(orbit={"operator": {"matrix": [[[1, 0], [0, 0]]]}}))
        assert exc_info.value.field == "orbit.operator.matrix"

    def test_frame_member_count(self):
        with pytest.raises(ConfigValidationError) as exc_info:
            parse_config(job(frame={"functionals": [[[1, 0]]], "vectors": [[[1, 0]], [[1, 0]]]}))
        assert exc_info.value.field == "frame.functionals"

    def test_frame_dimensions_must_agree(self):
        with pytest.raises(ConfigValidationError) as exc_info:
            parse_config(job(frame={"functionals": [[[1, 0]], [[1, 0], [0, 0]]],
                                    "vectors": [[[1, 0]], [[1, 0]]]}))
        assert exc_info.value.field == "frame"

    def test_x_length(self):
        with pytest.raises(ConfigValidationError):
            parse_config(job(x=[[1, 0]]))

    def test_message_format(self):
        error = ConfigValidationError("pair.f", "expected 2 coefficients, got 1")
        assert str(error) == "pair.f: expected 2 coefficients, got 1"


def test_schema_is_packaged():
    schema = load_schema()
    assert SCHEMA_VERSION == "v1.0"
    assert schema["required"] == ["group", "command"]
    assert schema["additionalProperties"] is False


def test_load_job_missing_file():
    with tempfile.TemporaryDirectory() as temp_dir:
        with pytest.raises(OSError):
            load_job(Path(temp_dir) / "missing.json")

from __future__ import annotations

import io as stdio
import math

import numpy as np
import pytest

from emergent_space.dynsys import TimeKind
from emergent_space.errors import SchemaError
from emergent_space.io import (
    canonical_json,
    format_float,
    matrix_json,
    parse_matrix,
    parse_property,
    parse_subset_arg,
    parse_system,
    system_json,
    write_csv,
)


class TestParseSystem:
    def test_roundtrip(self):
        payload = {
            "elements": ["1", "2", "3"],
            "transitions": {"1": "2", "2": "3", "3": "1"},
            "time": {"kind": "group", "horizon": 4},
        }
        sys = parse_system(payload)
        assert sys.labels == ("1", "2", "3")
        assert sys.time.kind is TimeKind.GROUP
        assert sys.time.horizon == 4
        assert system_json(sys) == payload

    def test_integer_labels_accepted(self):
        sys = parse_system({"elements": [1, 2], "transitions": {"1": 2, "2": 1}})
        assert sys.labels == ("1", "2")

    def test_missing_transition_path(self):
        with pytest.raises(SchemaError) as err:
            parse_system({"elements": ["1", "2", "3"], "transitions": {"1": "2", "2": "3"}})
        assert err.value.path == "/transitions/3"

    def test_poset_time_rejected(self):
        with pytest.raises(SchemaError) as err:
            parse_system(
                {
                    "elements": ["1"],
                    "transitions": {"1": "1"},
                    "time": {"kind": "poset"},
                }
            )
        assert err.value.path == "/time/kind"

    def test_undeclared_target(self):
        with pytest.raises(SchemaError) as err:
            parse_system({"elements": ["1"], "transitions": {"1": "9"}})
        assert err.value.path == "/transitions/1"

    def test_empty_elements(self):
        with pytest.raises(SchemaError):
            parse_system({"elements": [], "transitions": {}})

    def test_malformed_json_text(self):
        with pytest.raises(SchemaError):
            parse_system("{not json")


class TestParseMatrix:
    def test_pairs_roundtrip(self):
        m = np.array([[1, 1j], [-1j, 2]], dtype=complex)
        assert np.allclose(parse_matrix(matrix_json(m)), m)

    def test_wrapped_object(self):
        obj = {"name": "z", "matrix": [[[1, 0], [0, 0]], [[0, 0], [-1, 0]]]}
        assert np.allclose(parse_matrix(obj), np.diag([1, -1]))

    def test_ragged_row_rejected(self):
        with pytest.raises(SchemaError) as err:
            parse_matrix([[[1, 0]], [[0, 0], [1, 0]]])
        assert err.value.path == "/0"

    def test_bad_cell_rejected(self):
        with pytest.raises(SchemaError) as err:
            parse_matrix([[[1, 0], [0, 0]], [[0, 0], "x"]])
        assert err.value.path == "/1/1"


class TestParseProperty:
    def test_basic(self):
        p = parse_property({"name": "even", "truth": {"1": 0, "2": 1}})
        assert p.name == "even"
        assert p.truth == {"1": 0, "2": 1}

    def test_non_binary_rejected(self):
        with pytest.raises(SchemaError) as err:
            parse_property({"name": "p", "truth": {"1": 2}})
        assert err.value.path == "/truth/1"


class TestSubsetArg:
    def test_parse_with_spaces(self):
        sys = parse_system(
            {"elements": ["1", "2", "3"], "transitions": {"1": "1", "2": "2", "3": "3"}}
        )
        s = parse_subset_arg(sys.universe, " 1 , 3 ")
        assert s.labels() == ("1", "3")

    def test_empty_string_is_empty_set(self):
        sys = parse_system(
            {"elements": ["1"], "transitions": {"1": "1"}}
        )
        assert len(parse_subset_arg(sys.universe, "")) == 0


class TestCanonicalOutput:
    def test_float_17_digits(self):
        assert format_float(1.0 / 3.0) == "0.33333333333333331"
        assert format_float(0.5) == "0.5"
        assert format_float(1.0) == "1"

    def test_non_finite_rejected(self):
        with pytest.raises(ValueError):
            format_float(math.inf)

    def test_json_compact_and_ordered(self):
        text = canonical_json({"b": [1, 2.5, True, None], "a": "x"})
        assert text == '{"b":[1,2.5,true,null],"a":"x"}'

    def test_json_rejects_unknown_types(self):
        with pytest.raises(TypeError):
            canonical_json({"m": np.eye(2)})

    def test_csv_floats(self):
        buf = stdio.StringIO()
        write_csv(buf, ("t", "x"), [(0.0, 1.0 / 3.0), (1, 2)])
        lines = buf.getvalue().splitlines()
        assert lines[0] == "t,x"
        assert lines[1] == "0,0.33333333333333331"
        assert lines[2] == "1,2"

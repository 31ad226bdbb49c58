import json
from fractions import Fraction

import numpy as np
import pytest

from errors import InvalidParameter
from utils import (
    dump_json,
    format_complex,
    load_config_file,
    merge_config,
    parse_complex,
    parse_complex_list,
    to_jsonable,
    write_output,
)


@pytest.mark.parametrize("text,expected", [
    ("1.07i", 1.07j),
    ("i", 1j),
    ("-i", -1j),
    ("0.5+i", 0.5 + 1j),
    ("0.1+1.3j", 0.1 + 1.3j),
    (" 2 - 0.5i ", 2 - 0.5j),
    ("1/8", 0.125),
    ("-3", -3),
    ("1e-3i", 1e-3j),
])
def test_parse_complex(text, expected):
    assert parse_complex(text) == pytest.approx(expected)


@pytest.mark.parametrize("text", ["", "abc", "1/0", "1+2k"])
def test_parse_complex_rejects_garbage(text):
    with pytest.raises(InvalidParameter):
        parse_complex(text)


def test_parse_complex_list():
    assert parse_complex_list("1.1i, 1.2i,") == [1.1j, 1.2j]
    assert parse_complex_list(["1/4", 0.5]) == [0.25, 0.5]


def test_format_complex():
    assert format_complex(0.5) == "0.5+0i"
    assert format_complex(complex(1, -2)) == "1-2i"
    assert parse_complex(format_complex(0.1 + 1 / 3 * 1j)) == 0.1 + 1 / 3 * 1j


def test_to_jsonable():
    data = {"z": 1 + 2j, "values": np.array([1.5, 2.5]), "n": np.int64(3), "q": Fraction(1, 8), 4: (1j,)}
    assert to_jsonable(data) == {"z": [1.0, 2.0], "values": [1.5, 2.5], "n": 3, "q": "1/8", "4": [[0.0, 1.0]]}


def test_dump_json_is_deterministic():
    text = dump_json({"b": 1, "a": 2})
    assert text.endswith("\n")
    assert text.index('"a"') < text.index('"b"')
    assert json.loads(text) == {"a": 2, "b": 1}


def test_load_config_file(tmp_path):
    path = tmp_path / "run.json"
    path.write_text(json.dumps({"tol": 1e-10, "params": "p2"}))
    assert load_config_file(path) == {"tol": 1e-10, "params": "p2"}


@pytest.mark.parametrize("content", ["{not json", "[1, 2]"])
def test_load_config_file_rejects_bad_content(tmp_path, content):
    path = tmp_path / "run.json"
    path.write_text(content)
    with pytest.raises(InvalidParameter):
        load_config_file(path)


def test_load_config_file_missing(tmp_path):
    with pytest.raises(InvalidParameter):
        load_config_file(tmp_path / "absent.json")


def test_merge_config_flags_override_file():
    merged = merge_config({"tol": 1e-8, "seed": 3}, {"tol": 1e-10, "seed": None, "out": None})
    assert merged == {"tol": 1e-10, "seed": 3, "out": None}


def test_write_output(tmp_path, capsys):
    target = tmp_path / "nested" / "out.txt"
    write_output("hello\n", target)
    assert target.read_text() == "hello\n"
    write_output("to stdout\n")
    assert capsys.readouterr().out == "to stdout\n"

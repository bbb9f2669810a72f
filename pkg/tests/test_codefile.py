from __future__ import annotations

import json

import pytest

from weldlab.builders import build_cubic_lattice, build_repetition, build_solid, build_three_weld
from weldlab.codefile import CodeFileError, dumps, loads, read_code, to_document, write_code
from weldlab.css import Pauli, encoded_qubits

from small_codes import steane

BUILDERS = {
    "solid3": lambda: build_solid(3),
    "solid4": lambda: build_solid(4),
    "repetition5": lambda: build_repetition(5),
    "three_weld3": lambda: build_three_weld(3),
    "cube3": lambda: build_cubic_lattice(3, 2),
    "steane": steane,
}


@pytest.mark.parametrize("name", sorted(BUILDERS))
def test_roundtrip_is_identity_on_canonical_form(name):
    code = BUILDERS[name]()
    text = dumps(code)
    again = loads(text)
    assert dumps(again) == text
    assert again.n == code.n
    for p in Pauli:
        assert again.rows(p) == code.rows(p)
    assert encoded_qubits(again) == encoded_qubits(code)
    assert again.coords == code.coords


def test_file_roundtrip(tmp_path):
    path = tmp_path / "c.json"
    write_code(build_three_weld(3), path)
    assert read_code(path).metadata["builder"] == "three-weld"


def test_generators_written_sorted():
    doc = to_document(build_solid(3))
    assert all(g == sorted(g) for g in doc["z_generators"] + doc["x_generators"])
    assert doc["format_version"] == "1"


def test_syntax_error_reports_line_and_column():
    text = dumps(build_solid(3))
    broken = text.replace('"n": 30,', '"n": 30,,', 1)
    with pytest.raises(CodeFileError) as exc:
        loads(broken)
    assert "line 3 column" in str(exc.value)


def mutate(fn):
    doc = json.loads(dumps(build_solid(3)))
    fn(doc)
    return json.dumps(doc)


@pytest.mark.parametrize(
    "fn,where",
    [
        (lambda d: d["z_generators"][4].append(99), "$.z_generators[4]"),
        (lambda d: d.pop("metadata"), "$"),
        (lambda d: d.update(format_version="2"), "$.format_version"),
        (lambda d: d["qubits"][3].update(id=7), "$.qubits[3].id"),
        (lambda d: d["x_generators"][0].__setitem__(0, "a"), "$.x_generators[0][0]"),
        (lambda d: d["qubits"].pop(), "$.qubits"),
    ],
)
def test_invalid_documents_name_the_location(fn, where):
    with pytest.raises(CodeFileError) as exc:
        loads(mutate(fn))
    assert exc.value.location.startswith(where)


def test_anticommuting_file_still_parses():
    text = mutate(lambda d: d["x_generators"].append([0]))
    code = loads(text)
    from weldlab.css import commutation_audit

    assert not commutation_audit(code)

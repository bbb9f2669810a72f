from __future__ import annotations

import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from weldlab.builders import build_repetition, build_solid, build_three_weld
from weldlab.css import (
    Classification,
    CommutationError,
    CssCode,
    CssOperator,
    Pauli,
    SearchBudgetError,
    classify,
    commutation_audit,
    defect_energy,
    encoded_qubits,
    logical_generators,
    min_weight_logical,
    permute_qubits,
    restrict,
    syndrome,
)

from oracles import min_weight, rank, span
from small_codes import ALL, css, shor, steane, toric

EXPECTED_K = {"steane": 1, "422": 2, "shor": 1, "toric2": 2, "toric3": 2}


@pytest.mark.parametrize("name", sorted(ALL))
def test_textbook_codes_audit_and_k(name):
    code = ALL[name]()
    assert commutation_audit(code)
    assert encoded_qubits(code) == EXPECTED_K[name]
    assert encoded_qubits(code) == code.n - rank(code.rows(Pauli.X)) - rank(code.rows(Pauli.Z))


def test_anticommuting_generators_are_reported():
    bad = css(2, [(0,)], [(0, 1)])
    assert not commutation_audit(bad)
    with pytest.raises(CommutationError):
        encoded_qubits(bad)


def test_generator_type_is_enforced():
    x = CssOperator.from_indices(Pauli.X, 3, [0])
    with pytest.raises(ValueError):
        CssCode(3, (), (x,))
    with pytest.raises(ValueError):
        CssCode(3, (CssOperator.identity(Pauli.X, 3),), ())


def test_mixed_product_rejected():
    with pytest.raises(ValueError):
        CssOperator.from_indices(Pauli.X, 3, [0]) * CssOperator.from_indices(Pauli.Z, 3, [0])


def test_pauli_dual_and_parse():
    assert Pauli.X.dual is Pauli.Z and Pauli.parse("z") is Pauli.Z
    with pytest.raises(ValueError):
        Pauli.parse("y")


def test_syndrome_sides():
    code = steane()
    s = syndrome(code, code.operator(Pauli.Z, [6]))
    assert s.violated_x.support() == [0, 1, 2]
    assert s.violated_z.weight == 0
    assert s.defect_count == 3 == defect_energy(code, code.operator(Pauli.Z, [6]))


def test_restrict_and_classify():
    code = steane()
    all_z = code.operator(Pauli.Z, range(7))
    assert classify(code, all_z) is Classification.NONTRIVIAL_LOGICAL
    assert classify(code, code.z_generators[0]) is Classification.STABILIZER
    assert classify(code, code.operator(Pauli.Z, [0])) is Classification.DETECTABLE
    assert restrict(all_z, [1, 3]).qubits() == [1, 3]
    assert restrict(all_z, 0b101).qubits() == [0, 2]


@pytest.mark.parametrize("name", sorted(ALL))
def test_logical_generators_are_independent_logicals(name):
    code = ALL[name]()
    for p in Pauli:
        logs = logical_generators(code, p)
        assert len(logs) == EXPECTED_K[name]
        for l in logs:
            assert classify(code, l) is Classification.NONTRIVIAL_LOGICAL
        stabs = span(code.rows(p))
        assert rank(code.rows(p) + [l.bits for l in logs]) == rank(code.rows(p)) + len(logs)
        assert not any(l.bits in stabs for l in logs)


@pytest.mark.parametrize("name", ["steane", "422", "shor", "toric2", "toric3"])
def test_min_weight_matches_enumeration(name):
    code = ALL[name]()
    for p in Pauli:
        op = min_weight_logical(code, p)
        assert op is not None
        assert classify(code, op) is Classification.NONTRIVIAL_LOGICAL
        sector = "z" if p is Pauli.Z else "x"
        assert op.weight == min_weight(code.rows(Pauli.X), code.rows(Pauli.Z), code.n, sector)


def test_min_weight_search_path_agrees_with_coset_path():
    from weldlab.css import _weight_search

    for code in (toric(3), shor(), build_solid(3)):
        for p in Pauli:
            found = _weight_search(code, p, 12, 10**7)
            assert found.bit_count() == min_weight_logical(code, p).weight


def test_min_weight_cap_and_budget():
    code = build_solid(3)
    assert min_weight_logical(code, Pauli.X, weight_cap=8) is None
    with pytest.raises(SearchBudgetError):
        min_weight_logical(build_three_weld(3), Pauli.X, weight_cap=9, budget=1000)


def test_no_encoded_qubit_rejected():
    code = css(2, [(0, 1)], [(0, 1)])
    assert encoded_qubits(code) == 0
    with pytest.raises(ValueError):
        min_weight_logical(code, Pauli.Z)


CODES = {
    "steane": steane,
    "shor": shor,
    "toric3": lambda: toric(3),
    "repetition6": lambda: build_repetition(6),
    "solid3": lambda: build_solid(3),
    "three_weld3": lambda: build_three_weld(3),
}


@pytest.mark.parametrize("name", sorted(CODES))
def test_syndrome_linearity_1000_pairs(name):
    code = CODES[name]()
    rng = random.Random(name)
    for _ in range(1000):
        p = rng.choice(list(Pauli))
        a = CssOperator.from_bits(p, code.n, rng.getrandbits(code.n))
        b = CssOperator.from_bits(p, code.n, rng.getrandbits(code.n))
        sa, sb, sab = syndrome(code, a), syndrome(code, b), syndrome(code, a * b)
        assert sab.violated_x == sa.violated_x ^ sb.violated_x
        assert sab.violated_z == sa.violated_z ^ sb.violated_z


@settings(max_examples=50, deadline=None)
@given(st.permutations(range(9)), st.integers(0, (1 << 9) - 1))
def test_permutation_preserves_classification(perm, bits):
    code = shor()
    moved = permute_qubits(code, perm)
    assert encoded_qubits(moved) == 1
    for p in Pauli:
        op = CssOperator.from_bits(p, 9, bits)
        op2 = CssOperator.from_indices(p, 9, [perm[q] for q in op.qubits()])
        assert classify(code, op) is classify(moved, op2)
        assert defect_energy(code, op) == defect_energy(moved, op2)


def test_bad_stored_logicals_are_caught():
    from weldlab.css import logical_parities

    code = build_solid(3)
    broken = CssCode(code.n, code.x_generators, code.z_generators, code.qubits, {},
                     {Pauli.X: (code.x_generators[0],), Pauli.Z: code.logical_ops(Pauli.Z)})
    with pytest.raises(ValueError):
        logical_parities(broken, Pauli.Z)

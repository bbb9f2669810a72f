from __future__ import annotations

import random

import pytest

from weldlab.barrier import (
    BarrierResult,
    ErrorPath,
    IsingGraph,
    ProjectionNotApplicable,
    barrier_bounds,
    best_membrane,
    best_traversal,
    defect_walk_path,
    energy_profile,
    exact_barrier,
    frustrated_count,
    growth_orders,
    ising_exact_barrier,
    ising_peak,
    ising_projection_lower_bound,
    membrane_growth_path,
    path_peak,
    project_config,
    scaling_sweep,
    spiral_order,
    welded_traversal_path,
)
from weldlab.builders import (
    WeldGraph,
    build_cubic_lattice,
    build_repetition,
    build_solid,
    build_three_weld,
    build_welded_lattice,
    path_graph,
    star_graph,
)
from weldlab.css import Classification, CssCode, CssOperator, Pauli, defect_energy, permute_qubits

from oracles import code_barrier, ising_barrier
from small_codes import css, four_two_two, shor, steane, toric

SMALL = {"steane": steane, "shor": shor, "422": four_two_two, "toric2": lambda: toric(2)}


@pytest.mark.parametrize("name", sorted(SMALL))
@pytest.mark.parametrize("sector", ["x", "z"])
def test_exact_barrier_matches_union_find_oracle(name, sector):
    code = SMALL[name]()
    want = code_barrier(code.rows(Pauli.X), code.rows(Pauli.Z), code.n, sector)
    for mode in ("quotient", "configuration"):
        res = exact_barrier(code, sector, mode=mode)
        assert res.status == "exact" and res.value == want


@pytest.mark.parametrize("n", range(2, 9))
def test_repetition_barrier_is_one(n):
    code = build_repetition(n)
    res = exact_barrier(code, Pauli.Z)
    assert res.value == 1 == code_barrier(code.rows(Pauli.X), [], n, "z")


def test_solid_and_weld_values():
    assert exact_barrier(build_solid(3), Pauli.Z).value == 1
    assert exact_barrier(build_solid(4), Pauli.Z).value == 1
    assert exact_barrier(build_three_weld(3), Pauli.Z).value == 2
    assert exact_barrier(build_solid(3), Pauli.X).value == 4


def test_configuration_mode_agrees_on_solid():
    code = build_solid(3)
    q = exact_barrier(code, Pauli.Z, mode="quotient")
    c = exact_barrier(code, Pauli.Z, mode="configuration")
    assert q.value == c.value == 1
    assert c.states_visited >= q.states_visited


def test_witness_reevaluates():
    code = build_three_weld(3)
    res = exact_barrier(code, Pauli.Z)
    peak, final = path_peak(code, res.witness)
    assert peak == res.value and final is Classification.NONTRIVIAL_LOGICAL
    assert max(energy_profile(code, res.witness)) == peak and energy_profile(code, res.witness)[-1] == 0


def test_cap_gives_unknown_with_refuted_levels():
    res = exact_barrier(build_three_weld(3), Pauli.Z, state_cap=30)
    assert res.status == "unknown" and res.cap_hit
    assert res.upper is None and res.lower <= 2


def test_start_energy_hint():
    code = build_three_weld(3)
    hinted = exact_barrier(code, Pauli.Z, start_energy=2)
    assert hinted.value == 2 and hinted.notes
    assert hinted.states_visited < exact_barrier(code, Pauli.Z).states_visited + 1
    assert not exact_barrier(code, Pauli.Z).notes


def test_no_logical_rejected():
    with pytest.raises(ValueError):
        exact_barrier(css(2, [(0, 1)], [(0, 1)]), Pauli.Z)
    with pytest.raises(ValueError):
        exact_barrier(steane(), Pauli.Z, mode="bogus")


@pytest.mark.parametrize("seed", range(3))
def test_barrier_invariant_under_relabeling(seed):
    rng = random.Random(seed)
    for code, sector, want in ((build_three_weld(3), Pauli.Z, 2), (build_solid(3), Pauli.X, 4)):
        perm = list(range(code.n))
        rng.shuffle(perm)
        assert exact_barrier(permute_qubits(code, perm), sector).value == want


@pytest.mark.parametrize(
    "make,sector,cap",
    [
        (lambda: build_three_weld(3), Pauli.Z, 10**7),
        (lambda: build_solid(4), Pauli.X, 10**7),
        (lambda: build_cubic_lattice(3, 2), Pauli.Z, 5000),
    ],
)
def test_search_is_identical_across_worker_counts(make, sector, cap):
    code = make()
    one = exact_barrier(code, sector, cap, workers=1)
    four = exact_barrier(code, sector, cap, workers=4)
    assert one == four


# -- Ising ----------------------------------------------------------------


def brute_graph_cases():
    yield IsingGraph.path(5)
    yield IsingGraph((0, 1, 2, 3), ((0, 1), (1, 2), (2, 3), (3, 0)))
    yield IsingGraph.from_weld_graph(star_graph(3))
    yield IsingGraph((0, 1, 2, 3), ((0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)))
    from weldlab.builders import cubic_weld_graph

    yield IsingGraph.from_weld_graph(cubic_weld_graph(2))


@pytest.mark.parametrize("g", list(brute_graph_cases()), ids=lambda g: f"V{len(g.vertices)}E{len(g.edges)}")
def test_ising_matches_brute_force(g):
    res = ising_exact_barrier(g)
    assert res.value == ising_barrier(list(g.vertices), list(g.edges))


@pytest.mark.parametrize("n", range(2, 9))
def test_ising_path_is_one(n):
    assert ising_exact_barrier(IsingGraph.path(n)).value == 1


def test_ising_known_values():
    from weldlab.builders import cubic_weld_graph

    assert ising_exact_barrier(IsingGraph((0, 1, 2, 3), ((0, 1), (1, 2), (2, 3), (3, 0)))).value == 2
    assert ising_exact_barrier(IsingGraph.from_weld_graph(cubic_weld_graph(2))).value == 5
    assert ising_exact_barrier(IsingGraph.from_weld_graph(star_graph(3))).value == 2


def test_ising_peak_on_cube_orders():
    from weldlab.builders import cubic_weld_graph

    g = cubic_weld_graph(2)
    assert ising_peak(g, list(range(8))) == 5
    assert min(ising_peak(g, o) for o in growth_orders(g)) == 5


# -- projection --------------------------------------------------------------

WELDED = {
    "solid": lambda: build_solid(3),
    "three": lambda: build_three_weld(3),
    "path3": lambda: build_welded_lattice(3, path_graph(3)),
    "cube": lambda: build_cubic_lattice(3, 2),
}


@pytest.mark.parametrize("name", sorted(WELDED))
def test_projection_soundness_1000_configs(name):
    code = WELDED[name]()
    g = WeldGraph.from_dict(code.metadata["weld_graph"])
    rng = random.Random(name)
    for i in range(1000):
        # Mix dense and sparse configurations so low-energy states are sampled too.
        density = rng.choice([0.5, 0.1, 0.02])
        bits = sum(1 << q for q in range(code.n) if rng.random() < density)
        spins = project_config(code, bits)
        e = defect_energy(code, CssOperator.from_bits(Pauli.Z, code.n, bits))
        assert e >= frustrated_count(g, spins)


def test_projection_values():
    assert ising_projection_lower_bound(build_solid(3)) == 1
    assert ising_projection_lower_bound(build_three_weld(3)) == 2
    assert ising_projection_lower_bound(build_cubic_lattice(3, 2)) == 5
    with pytest.raises(ValueError):
        ising_projection_lower_bound(build_solid(3), Pauli.X)


def test_projection_refuses_codes_it_cannot_certify():
    code = build_three_weld(3)
    stripped = CssCode(code.n, code.x_generators, code.z_generators, code.qubits,
                       {**code.metadata, "x_generator_blocks": None}, code.logicals)
    with pytest.raises(ProjectionNotApplicable):
        ising_projection_lower_bound(stripped)
    wrong = dict(code.metadata)
    wrong["weld_vertices"] = [dict(w, qubits=w["qubits"][:-1]) for w in code.metadata["weld_vertices"]]
    with pytest.raises(ProjectionNotApplicable):
        ising_projection_lower_bound(CssCode(code.n, code.x_generators, code.z_generators, code.qubits, wrong, code.logicals))


# -- constructive paths --------------------------------------------------------


def test_defect_walk_is_a_logical_with_peak_one():
    code = build_solid(4)
    for d in ("up", "down"):
        p = defect_walk_path(code, (2, 3), direction=d)
        assert path_peak(code, p) == (1, Classification.NONTRIVIAL_LOGICAL)
    with pytest.raises(ValueError):
        defect_walk_path(code, (5, 1))


@pytest.mark.parametrize("name", ["three", "path3", "cube"])
def test_traversal_paths_enact_logical(name):
    code = WELDED[name]()
    g = WeldGraph.from_dict(code.metadata["weld_graph"])
    for order in growth_orders(g):
        peak, final = path_peak(code, welded_traversal_path(code, order))
        assert final is Classification.NONTRIVIAL_LOGICAL
        assert peak == ising_peak(g, order)


def test_three_weld_traversal_peak():
    code = build_three_weld(3)
    assert path_peak(code, welded_traversal_path(code, [1, 0, 2, 3]))[0] == 2
    assert path_peak(code, welded_traversal_path(code, [0, 1, 2, 3]))[0] == 3
    with pytest.raises(ValueError):
        welded_traversal_path(code, [1, 2, 0, 3])


def test_membrane_paths():
    code = build_solid(3)
    for order in ("row-major", "spiral"):
        peak, final = path_peak(code, membrane_growth_path(code, order=order))
        assert final is Classification.NONTRIVIAL_LOGICAL
        assert peak >= exact_barrier(code, Pauli.X).value
    assert sorted(spiral_order(3)) == sorted((x, y) for x in range(1, 4) for y in range(1, 4))
    assert spiral_order(3)[0] == (2, 2)
    with pytest.raises(ValueError):
        membrane_growth_path(code, layer=3)


def test_exact_between_projection_and_paths():
    for name in ("solid", "three", "path3"):
        code = WELDED[name]()
        exact = exact_barrier(code, Pauli.Z).value
        assert ising_projection_lower_bound(code) <= exact <= path_peak(code, best_traversal(code))[0]
    code = build_solid(3)
    assert exact_barrier(code, Pauli.X).value <= path_peak(code, best_membrane(code))[0]


def test_bounds_fallback_on_cube():
    res = barrier_bounds(build_cubic_lattice(3, 2), Pauli.Z, state_cap=5000)
    assert res.cap_hit and res.method == "bounds"
    assert res.status == "exact" and res.lower == res.upper == 5
    assert path_peak(build_cubic_lattice(3, 2), res.witness)[0] == 5


def test_result_serialization():
    res = exact_barrier(build_three_weld(3), Pauli.Z)
    d = res.to_dict()
    assert d["value"] == 2 and d["witness"]["pauli_type"] == "Z"
    assert ErrorPath.from_dict(d["witness"]) == res.witness
    with pytest.raises(ValueError):
        BarrierResult("exact", 1, 2)


def test_sweep_rows():
    rows = scaling_sweep([(3, 1), (3, 2)], state_cap=5000)
    assert [(r["N"], r["R"]) for r in rows] == [(3, 1), (3, 2)]
    solid, cube = rows
    assert solid["z_exact"] == 1 and solid["n"] == 30 and solid["k"] == 1
    assert cube["z_exact"] is None and cube["cap_hit"]
    assert 2 <= cube["z_lower"] <= cube["z_upper"]
    assert solid["z_lower"] <= cube["z_lower"]

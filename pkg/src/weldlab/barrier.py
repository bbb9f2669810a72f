"""Energy barriers of CSS Hamiltonians in one Pauli sector.

The energy of an error configuration is its number of violated generators.
The barrier is the least, over single-flip paths from the identity to a
nontrivial logical, of the largest energy met along the path.

Exact barriers are found by iterative deepening on the energy cap ``B``: a
breadth-first search of all configurations reachable without exceeding
``B``.  By default the search runs on configurations modulo the stabilizer
group.  Two configurations differing by a stabilizer have equal syndromes
along every continuation and lie in the same logical class, so the quotient
graph has exactly the same barrier; its states are (syndrome, logical
parities) and there are far fewer of them.
"""
from __future__ import annotations

import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Any, Callable, Iterable, Sequence

from .builders import WeldGraph, _solid_layout, block_qubit_index, build_cubic_lattice
from .css import (
    Classification,
    CssCode,
    CssOperator,
    Pauli,
    classify,
    encoded_qubits,
    logical_parities,
)

STATUS_EXACT = "exact"
STATUS_BOUNDED = "bounded"
STATUS_UNKNOWN = "unknown"


class ProjectionNotApplicable(ValueError):
    """The weld-graph projection argument does not certify this code."""


@dataclass(frozen=True)
class ErrorPath:
    """Ordered single-qubit flips of one Pauli type; repeats allowed."""

    pauli_type: Pauli
    flips: tuple[int, ...] = ()

    def configuration(self, upto: int | None = None) -> int:
        bits = 0
        for q in self.flips[:upto]:
            bits ^= 1 << q
        return bits

    def to_dict(self) -> dict[str, Any]:
        return {"pauli_type": self.pauli_type.value, "flips": list(self.flips)}

    @classmethod
    def from_dict(cls, d: dict[str, Any]) -> ErrorPath:
        return cls(Pauli.parse(d["pauli_type"]), tuple(int(q) for q in d["flips"]))


@dataclass
class BarrierResult:
    status: str
    lower: int
    upper: int | None
    witness: ErrorPath | None = None
    states_visited: int = 0
    cap_hit: bool = False
    method: str = "search"
    notes: list[str] = field(default_factory=list)

    def __post_init__(self) -> None:
        if self.upper is not None and self.lower > self.upper:
            raise ValueError(f"lower bound {self.lower} above upper bound {self.upper}")
        if self.status == STATUS_EXACT and self.lower != self.upper:
            raise ValueError("exact result needs lower == upper")

    @property
    def value(self) -> int | None:
        return self.lower if self.status == STATUS_EXACT else None

    def to_dict(self) -> dict[str, Any]:
        return {
            "status": self.status,
            "lower": self.lower,
            "upper": self.upper,
            "value": self.value,
            "method": self.method,
            "states_visited": self.states_visited,
            "cap_hit": self.cap_hit,
            "witness": self.witness.to_dict() if self.witness else None,
            "notes": list(self.notes),
        }


@dataclass(frozen=True)
class IsingGraph:
    """Classical spins with energy = number of frustrated edges."""

    vertices: tuple[int, ...]
    edges: tuple[tuple[int, int], ...]

    @classmethod
    def from_weld_graph(cls, g: WeldGraph) -> IsingGraph:
        return cls(tuple(g.vertices), tuple(g.edges))

    @classmethod
    def path(cls, n: int) -> IsingGraph:
        return cls(tuple(range(n)), tuple((i, i + 1) for i in range(n - 1)))

    def frustrated(self, spins: dict[int, int] | Sequence[int]) -> int:
        return sum(1 for u, v in self.edges if spins[u] != spins[v])


def default_workers() -> int:
    return int(os.environ.get("WELDLAB_THREADS", "1") or 1)


def path_peak(code: CssCode, path: ErrorPath) -> tuple[int, Classification]:
    """Largest defect count over the prefixes of ``path`` and the class it ends in."""
    pauli = path.pauli_type
    cols = code.columns(pauli.dual)
    syn = 0
    config = 0
    peak = 0
    for q in path.flips:
        if not 0 <= q < code.n:
            raise IndexError(f"qubit {q} outside 0..{code.n - 1}")
        syn ^= cols[q]
        config ^= 1 << q
        peak = max(peak, syn.bit_count())
    return peak, classify(code, CssOperator.from_bits(pauli, code.n, config))


def energy_profile(code: CssCode, path: ErrorPath) -> list[int]:
    cols = code.columns(path.pauli_type.dual)
    syn = 0
    out = [0]
    for q in path.flips:
        syn ^= cols[q]
        out.append(syn.bit_count())
    return out


# -- capped breadth-first search --------------------------------------------


@dataclass
class _LevelOutcome:
    goal: int | None
    parents: dict[int, int]
    cap_hit: bool


_BLOCK = 4096


def _expand(frontier: Sequence[int], moves: Sequence[tuple[int, int]], emask: int, cap: int, seen) -> list:
    out = []
    for s in frontier:
        for q, mv in moves:
            t = s ^ mv
            if (t & emask).bit_count() <= cap and t not in seen:
                out.append((t, q))
    return out


def _capped_bfs(
    moves: Sequence[tuple[int, int]],
    emask: int,
    is_goal: Callable[[int], bool],
    cap: int,
    state_cap: int,
    workers: int,
) -> _LevelOutcome:
    """Breadth-first search from state 0 through states of energy <= ``cap``.

    The frontier is expanded in blocks, each split across threads; candidates
    are merged in frontier order, so the visited set, parent links and
    stopping point are identical for every worker count.
    """
    # Each visited state maps to the qubit whose move reached it; the parent
    # is recovered by undoing that move.
    parents: dict[int, int] = {0: -1}
    if is_goal(0):
        return _LevelOutcome(0, parents, False)
    frontier = [0]
    pool = ThreadPoolExecutor(workers) if workers > 1 else None
    try:
        while frontier:
            nxt = []
            for start in range(0, len(frontier), _BLOCK * workers):
                block = frontier[start : start + _BLOCK * workers]
                if pool is None:
                    batches = [_expand(block, moves, emask, cap, parents)]
                else:
                    chunks = [block[i : i + _BLOCK] for i in range(0, len(block), _BLOCK)]
                    batches = list(pool.map(lambda c: _expand(c, moves, emask, cap, parents), chunks))
                for batch in batches:
                    for t, q in batch:
                        if t in parents:
                            continue
                        parents[t] = q
                        if is_goal(t):
                            return _LevelOutcome(t, parents, False)
                        if len(parents) > state_cap:
                            return _LevelOutcome(None, parents, True)
                        nxt.append(t)
            frontier = nxt
    finally:
        if pool is not None:
            pool.shutdown()
    return _LevelOutcome(None, parents, False)


def _trace(parents: dict[int, int], moves: Sequence[tuple[int, int]], goal: int) -> tuple[int, ...]:
    move_of = dict(moves)
    flips = []
    s = goal
    while s:
        q = parents[s]
        s ^= move_of[q]
        flips.append(q)
    return tuple(reversed(flips))


def _distinct_moves(masks: Sequence[int]) -> list[tuple[int, int]]:
    seen = set()
    out = []
    for q, mv in enumerate(masks):
        if mv not in seen:
            seen.add(mv)
            out.append((q, mv))
    return out


def _deepening(
    masks: Sequence[int],
    emask: int,
    is_goal: Callable[[int], bool],
    state_cap: int,
    workers: int,
    start: int,
    stop: int,
) -> tuple[int | None, int, tuple[int, ...] | None, int, bool]:
    """Returns (barrier, lowest unproven cap, flips, states visited, cap hit)."""
    moves = _distinct_moves(masks)
    visited = 0
    for b in range(start, stop + 1):
        out = _capped_bfs(moves, emask, is_goal, b, state_cap, workers)
        visited += len(out.parents)
        if out.goal is not None:
            return b, b, _trace(out.parents, moves, out.goal), visited, False
        if out.cap_hit:
            return None, b, None, visited, True
    return None, stop + 1, None, visited, False


def exact_barrier(
    code: CssCode,
    pauli_type: Pauli | str,
    state_cap: int = 10**7,
    *,
    workers: int | None = None,
    mode: str = "quotient",
    start_energy: int = 0,
    max_energy: int | None = None,
) -> BarrierResult:
    """Barrier of the ``pauli_type`` logical sector by energy-capped search.

    ``mode="quotient"`` searches configurations modulo stabilizers;
    ``mode="configuration"`` keeps every configuration distinct and is only
    practical for small codes.  ``start_energy`` skips caps the caller has
    already proven infeasible; it is trusted, and a result that relies on it
    says so in ``notes``.  ``state_cap`` bounds the visited set of a single cap level;
    exceeding it yields an ``unknown`` result with the caps proven so far.
    """
    pauli = Pauli.parse(pauli_type)
    k = encoded_qubits(code)
    if k < 1:
        raise ValueError("code encodes no qubits")
    if mode not in ("quotient", "configuration"):
        raise ValueError(f"unknown search mode {mode!r}")
    if workers is None:
        workers = default_workers()
    m = len(code.generators(pauli.dual))
    cols = code.columns(pauli.dual)
    lpar = logical_parities(code, pauli)
    masks = [cols[q] | (lpar[q] << m) for q in range(code.n)]
    if mode == "configuration":
        masks = [mv | (1 << (m + k + q)) for q, mv in enumerate(masks)]
    emask = (1 << m) - 1
    lmask = ((1 << k) - 1) << m

    def is_goal(s: int) -> bool:
        return not (s & emask) and bool(s & lmask)

    stop = m if max_energy is None else max_energy
    value, lower, flips, visited, cap_hit = _deepening(masks, emask, is_goal, state_cap, workers, start_energy, stop)
    if value is None:
        return BarrierResult(STATUS_UNKNOWN, lower, None, None, visited, cap_hit, f"search:{mode}")
    witness = ErrorPath(pauli, flips)
    peak, final = path_peak(code, witness)
    if final is not Classification.NONTRIVIAL_LOGICAL or peak > value:
        raise AssertionError("search witness failed re-evaluation")
    if peak < value:
        raise ValueError(f"start_energy={start_energy} exceeds the barrier")
    notes = [f"caps below {start_energy} assumed infeasible"] if start_energy else []
    return BarrierResult(STATUS_EXACT, value, value, witness, visited, False, f"search:{mode}", notes)


# -- constructive paths -------------------------------------------------------


def _block_column(code: CssCode, block: int, column: tuple[int, int]) -> list[int]:
    side = code.metadata.get("side")
    if side is None:
        raise ValueError("code carries no solid-block metadata")
    lay = _solid_layout(side)
    if column not in lay.columns:
        raise ValueError(f"column {column} outside 1..{side}")
    index = block_qubit_index(code)
    try:
        return [index[(block, q)] for q in lay.columns[column]]
    except KeyError:
        raise ValueError(f"block {block} not present in this code") from None


def defect_walk_path(
    code: CssCode, column: tuple[int, int] = (1, 1), *, block: int = 0, direction: str = "up"
) -> ErrorPath:
    """Z flips along one vertical column of a block, bottom to top by default."""
    qubits = _block_column(code, block, tuple(column))
    if direction == "down":
        qubits.reverse()
    elif direction != "up":
        raise ValueError("direction must be 'up' or 'down'")
    return ErrorPath(Pauli.Z, tuple(qubits))


def _weld_graph(code: CssCode) -> WeldGraph:
    try:
        return WeldGraph.from_dict(code.metadata["weld_graph"])
    except KeyError:
        raise ValueError("code carries no weld-graph metadata") from None


def _vertex_qubits(code: CssCode) -> dict[int, list[int]]:
    return {w["id"]: list(w["qubits"]) for w in code.metadata["weld_vertices"]}


def _check_growth_order(g: WeldGraph, order: Sequence[int]) -> None:
    if sorted(order) != sorted(g.vertices):
        raise ValueError("spin order must be a permutation of the weld vertices")
    done = set()
    for i, v in enumerate(order):
        if i and not any(w in done for w in g.neighbors(v)):
            raise ValueError(f"vertex {v} does not touch the domain grown so far")
        done.add(v)


def welded_traversal_path(
    code: CssCode, spin_order: Sequence[int], column: tuple[int, int] = (1, 1)
) -> ErrorPath:
    """Enact the Z logical by growing one spin domain over the weld graph.

    When a vertex joins, each block linking it to the domain first has its
    single defect walked along the column to the vertex's side, then the
    vertex's boundary qubit in that column is flipped.  No block ever holds
    more than one defect.
    """
    g = _weld_graph(code)
    _check_growth_order(g, spin_order)
    side = code.metadata["side"]
    lay = _solid_layout(side)
    vq = _vertex_qubits(code)
    slot = (column[1] - 1) * side + (column[0] - 1)
    index = block_qubit_index(code)
    middle = {b: [index[(b, q)] for q in lay.columns[column][1:-1]] for b in range(len(g.edges))}
    done: set[int] = set()
    flips: list[int] = []
    for v in spin_order:
        for b, (lo, hi) in enumerate(g.edges):
            if lo == v and hi in done:
                flips.extend(reversed(middle[b]))
            elif hi == v and lo in done:
                flips.extend(middle[b])
        flips.append(vq[v][slot])
        done.add(v)
    return ErrorPath(Pauli.Z, tuple(flips))


def spiral_order(side: int) -> list[tuple[int, int]]:
    """Grid cells of ``1..side`` squared, centre outwards by ring then angle."""
    c = (side + 1) / 2

    def key(cell: tuple[int, int]) -> tuple[float, float]:
        dx, dy = cell[0] - c, cell[1] - c
        return (max(abs(dx), abs(dy)), math.atan2(dy, dx))

    cells = [(x, y) for y in range(1, side + 1) for x in range(1, side + 1)]
    return sorted(cells, key=key)


def membrane_growth_path(
    code: CssCode,
    layer: int | None = None,
    order: str | Sequence[tuple[int, int]] = "row-major",
    *,
    block: int = 0,
) -> ErrorPath:
    """X flips of one horizontal layer of vertical edges, grown cell by cell.

    ``layer`` counts from 1 (edges ``z -> z+1``); ``order`` is ``"row-major"``,
    ``"spiral"`` or an explicit list of ``(x, y)`` columns, possibly partial.
    """
    side = code.metadata.get("side")
    if side is None:
        raise ValueError("code carries no solid-block metadata")
    lay = _solid_layout(side)
    if layer is None:
        layer = max(1, side // 2)
    if layer not in lay.layers:
        raise ValueError(f"layer {layer} outside 1..{side - 1}")
    if order == "row-major":
        cells = [(x, y) for y in range(1, side + 1) for x in range(1, side + 1)]
    elif order == "spiral":
        cells = spiral_order(side)
    elif isinstance(order, str):
        raise ValueError(f"unknown growth order {order!r}")
    else:
        cells = [tuple(c) for c in order]
    index = block_qubit_index(code)
    flips = []
    for cell in cells:
        if cell not in lay.layers[layer]:
            raise ValueError(f"cell {cell} outside the layer")
        flips.append(index[(block, lay.layers[layer][cell])])
    return ErrorPath(Pauli.X, tuple(flips))


# -- Ising reduction ----------------------------------------------------------


def ising_exact_barrier(
    g: IsingGraph, state_cap: int = 10**7, *, workers: int | None = None
) -> BarrierResult:
    """Minimax frustrated-edge count over spin-flip paths from all 0 to all 1."""
    if workers is None:
        workers = default_workers()
    pos = {v: i for i, v in enumerate(g.vertices)}
    m = len(g.edges)
    masks = [1 << (m + i) for i in range(len(g.vertices))]
    for e, (u, v) in enumerate(g.edges):
        masks[pos[u]] |= 1 << e
        masks[pos[v]] |= 1 << e
    emask = (1 << m) - 1
    target = ((1 << len(g.vertices)) - 1) << m
    value, lower, flips, visited, cap_hit = _deepening(
        masks, emask, lambda s: s == target, state_cap, workers, 0, m
    )
    if value is None:
        return BarrierResult(STATUS_UNKNOWN, lower, None, None, visited, cap_hit, "search:ising")
    witness = ErrorPath(Pauli.X, tuple(g.vertices[i] for i in flips))
    return BarrierResult(STATUS_EXACT, value, value, witness, visited, False, "search:ising")


def ising_peak(g: IsingGraph | WeldGraph, order: Sequence[int]) -> int:
    """Peak frustration when spins flip once each, in ``order``."""
    spins = {v: 0 for v in g.vertices}
    peak = 0
    for v in order:
        spins[v] = 1
        peak = max(peak, sum(1 for a, b in g.edges if spins[a] != spins[b]))
    return peak


def project_config(code: CssCode, bits: int) -> dict[int, int]:
    """Per weld vertex, the parity of ``bits`` on that boundary's qubits."""
    return {v: sum((bits >> q) & 1 for q in qs) & 1 for v, qs in _vertex_qubits(code).items()}


def frustrated_edges(g: IsingGraph | WeldGraph, spins: dict[int, int]) -> list[tuple[int, int]]:
    return [(u, v) for u, v in g.edges if spins[u] != spins[v]]


def frustrated_count(g: IsingGraph | WeldGraph, spins: dict[int, int]) -> int:
    return len(frustrated_edges(g, spins))


def _certify_projection(code: CssCode) -> WeldGraph:
    g = _weld_graph(code)
    masks = {v: sum(1 << q for q in qs) for v, qs in _vertex_qubits(code).items()}
    for h in code.rows(Pauli.Z):
        for v, mk in masks.items():
            if (h & mk).bit_count() & 1:
                raise ProjectionNotApplicable(f"a Z generator has odd parity on boundary {v}")
    # Product of one block's X generators must be X on exactly its two boundaries,
    # so an odd boundary-parity difference forces a defect inside that block.
    blocks = code.metadata.get("x_generator_blocks")
    if blocks is None or len(blocks) != len(code.x_generators):
        raise ProjectionNotApplicable("X generators carry no block assignment")
    products = [0] * len(g.edges)
    for b, x in zip(blocks, code.rows(Pauli.X)):
        products[b] ^= x
    for b, (u, v) in enumerate(g.edges):
        if products[b] != masks[u] ^ masks[v]:
            raise ProjectionNotApplicable(f"block {b} stars do not multiply to its boundaries")
    for l in code.logical_ops(Pauli.Z):
        spins = project_config(code, l.bits)
        if any(s != 1 for s in spins.values()):
            raise ProjectionNotApplicable("the Z logical does not project to all-ones")
    return g


def ising_projection_lower_bound(
    code: CssCode, pauli_type: Pauli | str = Pauli.Z, state_cap: int = 10**7
) -> int:
    """Lower bound on the Z barrier from the weld graph's Ising barrier.

    Every Z configuration costs at least as many defects as there are weld-graph
    edges whose endpoint boundaries see different error parities.
    """
    if Pauli.parse(pauli_type) is not Pauli.Z:
        raise ValueError("the boundary-parity projection only bounds the Z sector")
    if encoded_qubits(code) != 1:
        raise ProjectionNotApplicable("projection argument assumes a single logical qubit")
    g = _certify_projection(code)
    return ising_exact_barrier(IsingGraph.from_weld_graph(g), state_cap, workers=1).lower


def growth_orders(g: WeldGraph) -> list[list[int]]:
    """Candidate domain-growth orders: sorted order if connected, plus greedy ones."""
    out = []
    natural = sorted(g.vertices)
    try:
        _check_growth_order(g, natural)
        out.append(natural)
    except ValueError:
        pass
    for start in g.vertices:
        order = [start]
        inside = {start}
        while len(order) < len(g.vertices):
            frontier = sorted({w for v in inside for w in g.neighbors(v)} - inside)
            best = min(frontier, key=lambda w: (ising_peak(g, order + [w]), w))
            order.append(best)
            inside.add(best)
        if order not in out:
            out.append(order)
    return out


def best_traversal(code: CssCode) -> ErrorPath:
    g = _weld_graph(code)
    paths = [welded_traversal_path(code, o) for o in growth_orders(g)]
    return min(paths, key=lambda p: (path_peak(code, p)[0], len(p.flips)))


def best_membrane(code: CssCode) -> ErrorPath:
    paths = [membrane_growth_path(code, order=o) for o in ("row-major", "spiral")]
    return min(paths, key=lambda p: path_peak(code, p)[0])


def barrier_bounds(
    code: CssCode,
    pauli_type: Pauli | str,
    state_cap: int = 10**7,
    *,
    workers: int | None = None,
) -> BarrierResult:
    """Exact search, falling back on projection and constructive bounds.

    When the search hits its cap, the lower bound is the larger of the caps it
    refuted and the weld-graph projection; the upper bound is the best
    constructive path.  Matching bounds are reported as exact by ``bounds``.
    """
    pauli = Pauli.parse(pauli_type)
    res = exact_barrier(code, pauli, state_cap, workers=workers)
    if res.status == STATUS_EXACT:
        return res
    lower = res.lower
    notes = list(res.notes)
    witness = None
    if "weld_graph" in code.metadata:
        if pauli is Pauli.Z:
            try:
                proj = ising_projection_lower_bound(code, pauli, state_cap)
                notes.append(f"projection lower bound {proj}")
                lower = max(lower, proj)
            except ProjectionNotApplicable as exc:
                notes.append(f"projection not applicable: {exc}")
            witness = best_traversal(code)
        else:
            witness = best_membrane(code)
    upper = None
    if witness is not None:
        peak, final = path_peak(code, witness)
        if final is Classification.NONTRIVIAL_LOGICAL:
            upper = peak
            notes.append(f"constructive upper bound {peak}")
        else:
            witness = None
    if upper is not None and lower == upper:
        status = STATUS_EXACT
    elif upper is not None:
        status = STATUS_BOUNDED
    else:
        status = STATUS_UNKNOWN
    return BarrierResult(status, lower, upper, witness, res.states_visited, res.cap_hit, "bounds", notes)


# -- scaling sweep ------------------------------------------------------------

SWEEP_COLUMNS = (
    "N", "R", "n", "k", "z_lower", "z_upper", "z_exact", "x_upper", "states_visited", "cap_hit",
)


def scaling_sweep(
    points: Iterable[Sequence[int]],
    state_cap: int = 10**7,
    *,
    workers: int | None = None,
    exact: bool = True,
) -> list[dict[str, Any]]:
    """One row per ``(N, R)``: sizes, Z bounds, optional exact Z barrier, X upper bound.

    ``R = 1`` is a lone solid.  No exponent is fitted.
    """
    rows = []
    for side, width in points:
        code = build_cubic_lattice(side, width)
        k = encoded_qubits(code)
        z_lower = ising_projection_lower_bound(code, Pauli.Z, state_cap)
        z_upper = path_peak(code, best_traversal(code))[0]
        x_upper = path_peak(code, best_membrane(code))[0]
        z_exact = None
        visited = 0
        cap_hit = False
        if exact:
            res = exact_barrier(code, Pauli.Z, state_cap, workers=workers)
            visited, cap_hit = res.states_visited, res.cap_hit
            z_exact = res.value
        rows.append(
            {
                "N": side,
                "R": width,
                "n": code.n,
                "k": k,
                "z_lower": z_lower,
                "z_upper": z_upper,
                "z_exact": z_exact,
                "x_upper": x_upper,
                "states_visited": visited,
                "cap_hit": cap_hit,
            }
        )
    return rows


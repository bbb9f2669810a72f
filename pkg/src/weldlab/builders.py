"""Constructors for solid codes, welded solid codes and the repetition baseline.

Lattice vertices are ``(x, y, z)`` with each coordinate in ``1..N``.  Qubits
sit on edges; an edge's coordinate is the sum of its endpoints (its midpoint,
doubled so it stays integral).  The bottom rough boundary is the layer of
vertical edges ``z = 1 -> 2`` and the top one is ``z = N-1 -> N``.
"""
from __future__ import annotations

import itertools
from collections import deque
from dataclasses import dataclass
from functools import lru_cache
from typing import Any, Sequence

from .css import CssCode, CssOperator, Pauli, QubitInfo
from .welding import WeldIdentification, weld_pair

Vertex = tuple[int, int, int]
Edge = tuple[Vertex, Vertex]

_UNIT = ((1, 0, 0), (0, 1, 0), (0, 0, 1))


@dataclass(frozen=True)
class SolidSpec:
    """Solid code of ``side`` vertices per axis, i.e. ``side - 1`` cells."""

    side: int

    def __post_init__(self) -> None:
        if self.side < 3:
            raise ValueError(f"side must be at least 3 (got {self.side}); smaller solids have no stabilizers")

    @property
    def cells(self) -> int:
        return self.side - 1


@dataclass(frozen=True)
class WeldGraph:
    """Macroscopic weld graph: vertices are boundaries, edges are solid blocks.

    Edge ``(u, v)`` puts the block's bottom boundary at ``u`` and its top at ``v``.
    """

    vertices: tuple[int, ...]
    edges: tuple[tuple[int, int], ...]

    def __post_init__(self) -> None:
        vs = set(self.vertices)
        if len(vs) != len(self.vertices):
            raise ValueError("duplicate vertices")
        seen = set()
        for u, v in self.edges:
            if u == v:
                raise ValueError(f"self-loop at {u}")
            if u not in vs or v not in vs:
                raise ValueError(f"edge ({u}, {v}) leaves the vertex set")
            key = frozenset((u, v))
            if key in seen:
                raise ValueError(f"duplicate edge ({u}, {v})")
            seen.add(key)

    def degree(self, v: int) -> int:
        return sum(1 for e in self.edges if v in e)

    def neighbors(self, v: int) -> list[int]:
        return [b if a == v else a for a, b in self.edges if v in (a, b)]

    def is_connected(self) -> bool:
        if not self.vertices:
            return True
        seen = {self.vertices[0]}
        todo = deque(seen)
        while todo:
            for w in self.neighbors(todo.popleft()):
                if w not in seen:
                    seen.add(w)
                    todo.append(w)
        return len(seen) == len(self.vertices)

    def to_dict(self) -> dict[str, Any]:
        return {"vertices": list(self.vertices), "edges": [list(e) for e in self.edges]}

    @classmethod
    def from_dict(cls, d: dict[str, Any]) -> WeldGraph:
        return cls(tuple(d["vertices"]), tuple((int(a), int(b)) for a, b in d["edges"]))


def single_edge_graph() -> WeldGraph:
    return WeldGraph((0, 1), ((0, 1),))


def path_graph(n_vertices: int) -> WeldGraph:
    return WeldGraph(tuple(range(n_vertices)), tuple((i, i + 1) for i in range(n_vertices - 1)))


def star_graph(leaves: int) -> WeldGraph:
    """Center 0 joined to leaves ``1..leaves``; blocks have their bottom at the center."""
    return WeldGraph(tuple(range(leaves + 1)), tuple((0, i) for i in range(1, leaves + 1)))


def cubic_weld_graph(width: int) -> WeldGraph:
    """``width**3`` lattice points with nearest-neighbour edges, ``3 R^2 (R-1)`` of them."""
    if width < 1:
        raise ValueError("width must be at least 1")
    r = width

    def idx(x: int, y: int, z: int) -> int:
        return x + r * y + r * r * z

    edges = []
    for z, y, x in itertools.product(range(r), repeat=3):
        for dx, dy, dz in _UNIT:
            if x + dx < r and y + dy < r and z + dz < r:
                edges.append((idx(x, y, z), idx(x + dx, y + dy, z + dz)))
    return WeldGraph(tuple(range(r**3)), tuple(edges))


def _add(v: Vertex, d: Sequence[int]) -> Vertex:
    return (v[0] + d[0], v[1] + d[1], v[2] + d[2])


@dataclass(frozen=True)
class _SolidLayout:
    side: int
    edges: tuple[Edge, ...]
    x_supports: tuple[tuple[int, ...], ...]
    z_supports: tuple[tuple[int, ...], ...]
    bottom: dict[tuple[int, int], int]
    top: dict[tuple[int, int], int]
    columns: dict[tuple[int, int], tuple[int, ...]]
    layers: dict[int, dict[tuple[int, int], int]]


@lru_cache(maxsize=None)
def _solid_layout(side: int) -> _SolidLayout:
    n = side
    rng = range(1, n + 1)
    edges: list[Edge] = []
    # vertical edges, then horizontal edges of the inner layers
    for z, y, x in itertools.product(range(1, n), rng, rng):
        edges.append(((x, y, z), (x, y, z + 1)))
    for z, y, x in itertools.product(range(2, n), rng, rng):
        if x < n:
            edges.append(((x, y, z), (x + 1, y, z)))
        if y < n:
            edges.append(((x, y, z), (x, y + 1, z)))
    index = {e: i for i, e in enumerate(edges)}

    incident: dict[Vertex, list[int]] = {}
    for i, (a, b) in enumerate(edges):
        incident.setdefault(a, []).append(i)
        incident.setdefault(b, []).append(i)
    x_supports = []
    for z, y, x in itertools.product(rng, rng, rng):
        star = incident.get((x, y, z), [])
        if len(star) > 1:
            x_supports.append(tuple(sorted(star)))

    z_supports = []
    for a, b in ((0, 1), (0, 2), (1, 2)):
        da, db = _UNIT[a], _UNIT[b]
        for z, y, x in itertools.product(rng, rng, rng):
            v = (x, y, z)
            corner = _add(_add(v, da), db)
            if max(corner) > n:
                continue
            sides = [(v, _add(v, da)), (v, _add(v, db)), (_add(v, da), corner), (_add(v, db), corner)]
            present = sorted(index[e] for e in sides if e in index)
            if len(present) >= 3:
                z_supports.append(tuple(present))

    layers = {
        z: {(x, y): index[((x, y, z), (x, y, z + 1))] for y in rng for x in rng} for z in range(1, n)
    }
    columns = {(x, y): tuple(layers[z][(x, y)] for z in range(1, n)) for y in rng for x in rng}
    return _SolidLayout(
        side, tuple(edges), tuple(x_supports), tuple(z_supports), layers[1], layers[n - 1], columns, layers
    )


def _solid_block(side: int, block: int, bottom_vertex: int, top_vertex: int, mirrored: bool = False) -> CssCode:
    lay = _solid_layout(side)
    n = len(lay.edges)
    bottom_q = set(lay.bottom.values())
    top_q = set(lay.top.values())
    qubits = []
    for i, (a, b) in enumerate(lay.edges):
        coords = tuple(p + q for p, q in zip(a, b))
        if mirrored:
            coords = (coords[0], coords[1], 6 - coords[2])
        tags: dict[str, Any] = {"sites": [[block, list(a), list(b)]]}
        if i in bottom_q:
            tags["boundary"] = "bottom"
            tags["vertex"] = bottom_vertex
        elif i in top_q:
            tags["boundary"] = "top"
            tags["vertex"] = top_vertex
        qubits.append(QubitInfo(i, coords, tags))
    xs = tuple(CssOperator.from_indices(Pauli.X, n, s) for s in lay.x_supports)
    zs = tuple(CssOperator.from_indices(Pauli.Z, n, s) for s in lay.z_supports)
    mid = max(1, side // 2)
    logicals = {
        Pauli.Z: (CssOperator.from_indices(Pauli.Z, n, lay.columns[(1, 1)]),),
        Pauli.X: (CssOperator.from_indices(Pauli.X, n, lay.layers[mid].values()),),
    }
    meta = {"x_generator_blocks": [block] * len(xs)}
    return CssCode(n, xs, zs, tuple(qubits), meta, logicals)


def _lattice_metadata(code: CssCode, spec: SolidSpec, graph: WeldGraph, builder: str, params: dict) -> dict:
    vertex_qubits: dict[int, dict[tuple[int, int], int]] = {v: {} for v in graph.vertices}
    lay = _solid_layout(spec.side)
    rev_bottom = {q: ij for ij, q in lay.bottom.items()}
    rev_top = {q: ij for ij, q in lay.top.items()}
    local = _local_index(code, spec.side)
    for b, (u, v) in enumerate(graph.edges):
        for q_local, ij in rev_bottom.items():
            vertex_qubits[u].setdefault(ij, local[(b, q_local)])
        for q_local, ij in rev_top.items():
            vertex_qubits[v].setdefault(ij, local[(b, q_local)])
    weld_vertices = []
    for v in graph.vertices:
        qs = vertex_qubits[v]
        weld_vertices.append(
            {"id": v, "degree": graph.degree(v), "qubits": [qs[ij] for ij in sorted(qs, key=lambda t: (t[1], t[0]))]}
        )
    return {
        "builder": builder,
        "params": params,
        "side": spec.side,
        "weld_graph": graph.to_dict(),
        "blocks": [{"id": b, "edge": list(e)} for b, e in enumerate(graph.edges)],
        "weld_vertices": weld_vertices,
        "x_generator_blocks": list(code.metadata.get("x_generator_blocks", [])),
        "identification": "boundary layers matched by column (x, y); bottom layer is z=1->2, top is z=N-1->N",
        "coordinate_frame": "per-block",
    }


def _local_index(code: CssCode, side: int) -> dict[tuple[int, int], int]:
    idx = {e: i for i, e in enumerate(_solid_layout(side).edges)}
    out = {}
    for info in code.qubits:
        for block, a, b in info.tags.get("sites", []):
            out[(block, idx[(tuple(a), tuple(b))])] = info.id
    return out


def block_qubit_index(code: CssCode) -> dict[tuple[int, int], int]:
    """Map ``(block, solid-local qubit index)`` to qubit id for builder codes."""
    cache = code.__dict__.setdefault("_block_index", {})
    if not cache:
        cache.update(_local_index(code, code.metadata["side"]))
    return cache


def build_solid(spec: SolidSpec | int) -> CssCode:
    if isinstance(spec, int):
        spec = SolidSpec(spec)
    block = _solid_block(spec.side, 0, 0, 1)
    meta = _lattice_metadata(block, spec, single_edge_graph(), "solid", {"side": spec.side})
    return CssCode(block.n, block.x_generators, block.z_generators, block.qubits, meta, block.logicals)


def build_repetition(n_spins: int) -> CssCode:
    """Open chain with two-body X checks on neighbours; Z flips create domain walls.

    The chain's Z-type logical is the all-ones string, so the Z sector plays the
    same role here as the string sector of the solid code.
    """
    if n_spins < 2:
        raise ValueError("need at least two spins")
    n = n_spins
    xs = tuple(CssOperator.from_indices(Pauli.X, n, (i, i + 1)) for i in range(n - 1))
    qubits = tuple(QubitInfo(i, (2 * i, 0, 0), {}) for i in range(n))
    logicals = {
        Pauli.Z: (CssOperator.from_indices(Pauli.Z, n, range(n)),),
        Pauli.X: (CssOperator.from_indices(Pauli.X, n, (0,)),),
    }
    meta = {"builder": "repetition", "params": {"n_spins": n}}
    return CssCode(n, xs, (), qubits, meta, logicals)


def _fold_order(graph: WeldGraph) -> list[int]:
    order = [0]
    touched = set(graph.edges[0])
    remaining = list(range(1, len(graph.edges)))
    while remaining:
        for pos, b in enumerate(remaining):
            u, v = graph.edges[b]
            if u in touched or v in touched:
                order.append(b)
                touched.update((u, v))
                del remaining[pos]
                break
        else:
            raise ValueError("weld graph is disconnected")
    return order


def weld_solids(spec: SolidSpec, graph: WeldGraph):
    """Fold one solid per graph edge into a single welded code.

    Returns the code and the per-fold weld reports.
    """
    if not graph.edges:
        raise ValueError("weld graph has no edges")
    if not graph.is_connected():
        raise ValueError("weld graph is disconnected")
    lay = _solid_layout(spec.side)
    order = _fold_order(graph)
    first = order[0]
    code = _solid_block(spec.side, first, *graph.edges[first])
    vertex_qubits: dict[int, dict[tuple[int, int], int]] = {}
    u, v = graph.edges[first]
    vertex_qubits[u] = dict(lay.bottom)
    vertex_qubits[v] = dict(lay.top)
    reports = []
    for b in order[1:]:
        u, v = graph.edges[b]
        block = _solid_block(spec.side, b, u, v)
        mapping = {}
        for w, layer in ((u, lay.bottom), (v, lay.top)):
            if w in vertex_qubits:
                for ij, q_local in layer.items():
                    mapping[q_local] = vertex_qubits[w][ij]
        ident = WeldIdentification(code.n, block.n, mapping)
        layout = ident.layout()
        code, report = weld_pair(code, block, ident)
        reports.append(report)
        for w, layer in ((u, lay.bottom), (v, lay.top)):
            if w not in vertex_qubits:
                vertex_qubits[w] = {ij: layout.map2[q_local] for ij, q_local in layer.items()}
    return code, reports


def build_welded_lattice(
    spec: SolidSpec | int, graph: WeldGraph, *, builder: str = "welded", params: dict | None = None
) -> CssCode:
    if isinstance(spec, int):
        spec = SolidSpec(spec)
    code, _ = weld_solids(spec, graph)
    if params is None:
        params = {"side": spec.side, "graph": graph.to_dict()}
    meta = _lattice_metadata(code, spec, graph, builder, params)
    return CssCode(code.n, code.x_generators, code.z_generators, code.qubits, meta, code.logicals)


def build_three_weld(spec: SolidSpec | int) -> CssCode:
    """Three solids sharing their bottom rough boundaries.

    Weld vertex 0 is the shared boundary; vertices 1..3 are the free tops.
    """
    if isinstance(spec, int):
        spec = SolidSpec(spec)
    return build_welded_lattice(spec, star_graph(3), builder="three-weld", params={"side": spec.side})


def build_cubic_lattice(spec: SolidSpec | int, width: int) -> CssCode:
    """Solids welded along :func:`cubic_weld_graph`; ``width=1`` is a lone solid."""
    if isinstance(spec, int):
        spec = SolidSpec(spec)
    if width == 1:
        return build_solid(spec)
    return build_welded_lattice(
        spec, cubic_weld_graph(width), params={"side": spec.side, "lattice": width}
    )


def solid_pair_for_weld(spec: SolidSpec | int) -> tuple[CssCode, CssCode, WeldIdentification]:
    """Two solids in one frame, the second mirrored below the first.

    Their bottom boundaries coincide in space and are identified column by column.
    """
    if isinstance(spec, int):
        spec = SolidSpec(spec)
    lay = _solid_layout(spec.side)
    upper = build_solid(spec)
    lower = _solid_block(spec.side, 1, 0, 2, mirrored=True)
    ident = WeldIdentification(upper.n, lower.n, {q: lay.bottom[ij] for ij, q in lay.bottom.items()})
    return upper, lower, ident


def solid_qubit_count(side: int) -> int:
    n = side
    return n * n * (n - 1) + 2 * n * (n - 1) * (n - 2)

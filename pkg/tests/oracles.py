"""Brute-force reference implementations, independent of the package internals."""
from __future__ import annotations

import itertools


def span(rows: list[int]) -> set[int]:
    out = {0}
    for r in rows:
        out |= {v ^ r for v in out}
    return out


def rank(rows: list[int]) -> int:
    return len(span(rows)).bit_length() - 1


def kernel(rows: list[int], cols: int) -> set[int]:
    return {v for v in range(1 << cols) if all(((r & v).bit_count() & 1) == 0 for r in rows)}


class _DSU:
    def __init__(self) -> None:
        self.parent: dict[int, int] = {}

    def add(self, x: int) -> None:
        self.parent.setdefault(x, x)

    def find(self, x: int) -> int:
        while self.parent[x] != x:
            self.parent[x] = self.parent[self.parent[x]]
            x = self.parent[x]
        return x

    def union(self, a: int, b: int) -> None:
        self.parent[self.find(a)] = self.find(b)


def minimax_barrier(n: int, energy, is_goal) -> int:
    """Bottleneck distance from state 0 to any goal on the n-cube of bit flips."""
    states = sorted(range(1 << n), key=energy)
    dsu = _DSU()
    goals = [s for s in range(1 << n) if is_goal(s)]
    i = 0
    while i < len(states):
        level = energy(states[i])
        while i < len(states) and energy(states[i]) == level:
            s = states[i]
            dsu.add(s)
            for q in range(n):
                t = s ^ (1 << q)
                if t in dsu.parent:
                    dsu.union(s, t)
            i += 1
        if 0 in dsu.parent:
            root = dsu.find(0)
            if any(g in dsu.parent and dsu.find(g) == root for g in goals):
                return level
    raise ValueError("no goal reachable")


def code_barrier(x_rows: list[int], z_rows: list[int], n: int, sector: str) -> int:
    """Barrier of the given error sector by union-find over all 2^n configurations."""
    checks = x_rows if sector == "z" else z_rows
    stabs = span(z_rows if sector == "z" else x_rows)
    syn = lambda s: sum((c & s).bit_count() & 1 for c in checks)
    return minimax_barrier(n, syn, lambda s: syn(s) == 0 and s not in stabs)


def ising_barrier(vertices: list[int], edges: list[tuple[int, int]]) -> int:
    pos = {v: i for i, v in enumerate(vertices)}
    full = (1 << len(vertices)) - 1

    def energy(s: int) -> int:
        return sum(((s >> pos[u]) ^ (s >> pos[v])) & 1 for u, v in edges)

    return minimax_barrier(len(vertices), energy, lambda s: s == full)


def min_weight(x_rows: list[int], z_rows: list[int], n: int, sector: str) -> int:
    """Least weight of a nontrivial logical of type ``sector`` by enumeration."""
    checks = x_rows if sector == "z" else z_rows
    stabs = span(z_rows if sector == "z" else x_rows)
    for w in range(1, n + 1):
        for combo in itertools.combinations(range(n), w):
            v = sum(1 << q for q in combo)
            if all(((c & v).bit_count() & 1) == 0 for c in checks) and v not in stabs:
                return w
    raise ValueError("no logical")

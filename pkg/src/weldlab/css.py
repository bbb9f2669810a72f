"""CSS stabilizer codes: generators, syndromes, logical operators."""
from __future__ import annotations

import enum
from dataclasses import dataclass, field
from functools import cached_property
from typing import Any, Iterable, Sequence

from .gf2 import BitVector, Gf2Matrix, RowBasis, bits_of, kernel_basis, mask_of, rank


class Pauli(str, enum.Enum):
    X = "X"
    Z = "Z"

    @property
    def dual(self) -> Pauli:
        return Pauli.Z if self is Pauli.X else Pauli.X

    @classmethod
    def parse(cls, value: str | Pauli) -> Pauli:
        if isinstance(value, Pauli):
            return value
        return cls(str(value).upper())


class Classification(str, enum.Enum):
    STABILIZER = "stabilizer"
    NONTRIVIAL_LOGICAL = "nontrivial_logical"
    DETECTABLE = "detectable"


class CommutationError(ValueError):
    """Raised when an operation needs a commuting generating set."""


class SearchBudgetError(RuntimeError):
    """Raised when an exhaustive search would exceed its explicit budget."""


@dataclass(frozen=True)
class CssOperator:
    """A pure X or pure Z Pauli product given by its support; phases dropped."""

    pauli_type: Pauli
    support: BitVector

    @classmethod
    def from_indices(cls, pauli_type: Pauli | str, n: int, indices: Iterable[int]) -> CssOperator:
        return cls(Pauli.parse(pauli_type), BitVector.from_indices(n, indices))

    @classmethod
    def from_bits(cls, pauli_type: Pauli | str, n: int, bits: int) -> CssOperator:
        return cls(Pauli.parse(pauli_type), BitVector(n, bits))

    @classmethod
    def identity(cls, pauli_type: Pauli | str, n: int) -> CssOperator:
        return cls(Pauli.parse(pauli_type), BitVector.zeros(n))

    @property
    def bits(self) -> int:
        return self.support.bits

    @property
    def n(self) -> int:
        return self.support.length

    @property
    def weight(self) -> int:
        return self.support.weight

    def qubits(self) -> list[int]:
        return self.support.support()

    def __mul__(self, other: CssOperator) -> CssOperator:
        if other.pauli_type is not self.pauli_type:
            raise ValueError("product of mixed-type operators is out of scope")
        return CssOperator(self.pauli_type, self.support ^ other.support)

    def __str__(self) -> str:
        return f"{self.pauli_type.value}{self.qubits()}"


@dataclass(frozen=True)
class QubitInfo:
    id: int
    coords: tuple[int, ...] | None = None
    tags: dict[str, Any] = field(default_factory=dict, compare=True, hash=False)


@dataclass(frozen=True)
class Syndrome:
    violated_x: BitVector
    violated_z: BitVector

    @property
    def defect_count(self) -> int:
        return self.violated_x.weight + self.violated_z.weight


@dataclass(frozen=True, eq=False)
class CssCode:
    """Qubits plus verbatim X and Z generating sets.

    Energies are always counted against the stored generating set; nothing
    here canonicalizes or prunes generators.  ``logicals`` optionally carries
    preferred logical representatives (e.g. the geometric string and membrane
    of a builder); when absent they are computed on demand.
    """

    n: int
    x_generators: tuple[CssOperator, ...]
    z_generators: tuple[CssOperator, ...]
    qubits: tuple[QubitInfo, ...] = ()
    metadata: dict[str, Any] = field(default_factory=dict)
    logicals: dict[Pauli, tuple[CssOperator, ...]] | None = None

    def __post_init__(self) -> None:
        if not self.qubits:
            object.__setattr__(self, "qubits", tuple(QubitInfo(i) for i in range(self.n)))
        if len(self.qubits) != self.n:
            raise ValueError(f"{len(self.qubits)} qubit records for n={self.n}")
        object.__setattr__(self, "x_generators", tuple(self.x_generators))
        object.__setattr__(self, "z_generators", tuple(self.z_generators))
        for pauli, gens in ((Pauli.X, self.x_generators), (Pauli.Z, self.z_generators)):
            for g in gens:
                if g.pauli_type is not pauli:
                    raise ValueError(f"{g} listed among {pauli.value} generators")
                if g.n != self.n:
                    raise ValueError(f"generator on {g.n} qubits in an n={self.n} code")
                if not g.bits:
                    raise ValueError("generator supports must be nonempty")
        if self.logicals is not None:
            fixed = {Pauli.parse(k): tuple(v) for k, v in self.logicals.items()}
            object.__setattr__(self, "logicals", fixed)

    def generators(self, pauli: Pauli | str) -> tuple[CssOperator, ...]:
        return self.x_generators if Pauli.parse(pauli) is Pauli.X else self.z_generators

    def rows(self, pauli: Pauli | str) -> list[int]:
        return self._x_rows if Pauli.parse(pauli) is Pauli.X else self._z_rows

    @cached_property
    def _x_rows(self) -> list[int]:
        return [g.bits for g in self.x_generators]

    @cached_property
    def _z_rows(self) -> list[int]:
        return [g.bits for g in self.z_generators]

    def check_matrix(self, pauli: Pauli | str) -> Gf2Matrix:
        return Gf2Matrix(self.n, tuple(self.rows(pauli)))

    def stabilizer_basis(self, pauli: Pauli | str) -> RowBasis:
        pauli = Pauli.parse(pauli)
        cache = self.__dict__.setdefault("_basis_cache", {})
        if pauli not in cache:
            cache[pauli] = RowBasis(self.rows(pauli))
        return cache[pauli]

    def columns(self, checks: Pauli | str) -> list[int]:
        """Per qubit, the packed set of ``checks``-type generators touching it."""
        checks = Pauli.parse(checks)
        cache = self.__dict__.setdefault("_column_cache", {})
        if checks not in cache:
            cols = [0] * self.n
            for i, r in enumerate(self.rows(checks)):
                for q in bits_of(r):
                    cols[q] |= 1 << i
            cache[checks] = cols
        return cache[checks]

    @property
    def coords(self) -> list[tuple[int, ...] | None]:
        return [q.coords for q in self.qubits]

    def operator(self, pauli: Pauli | str, indices: Iterable[int]) -> CssOperator:
        return CssOperator.from_indices(pauli, self.n, indices)

    def logical_ops(self, pauli: Pauli | str) -> tuple[CssOperator, ...]:
        """Stored logical representatives if present, else computed ones."""
        pauli = Pauli.parse(pauli)
        if self.logicals and self.logicals.get(pauli):
            return self.logicals[pauli]
        cache = self.__dict__.setdefault("_logical_cache", {})
        if pauli not in cache:
            cache[pauli] = tuple(logical_generators(self, pauli))
        return cache[pauli]


def commutation_audit(code: CssCode) -> bool:
    for x in code.rows(Pauli.X):
        for z in code.rows(Pauli.Z):
            if (x & z).bit_count() & 1:
                return False
    return True


def _require_audit(code: CssCode) -> None:
    cache = code.__dict__.setdefault("_audit", [])
    if not cache:
        cache.append(commutation_audit(code))
    if not cache[0]:
        raise CommutationError("X and Z generators do not commute")


def _check_len(code: CssCode, op: CssOperator) -> None:
    if op.n != code.n:
        raise ValueError(f"operator on {op.n} qubits, code has {code.n}")


def syndrome_bits(code: CssCode, pauli: Pauli, bits: int) -> int:
    """Packed violated-generator set for a ``pauli``-type error with support ``bits``."""
    out = 0
    for i, r in enumerate(code.rows(pauli.dual)):
        if (r & bits).bit_count() & 1:
            out |= 1 << i
    return out


def syndrome(code: CssCode, error: CssOperator) -> Syndrome:
    _check_len(code, error)
    s = syndrome_bits(code, error.pauli_type, error.bits)
    mx, mz = len(code.x_generators), len(code.z_generators)
    if error.pauli_type is Pauli.Z:
        return Syndrome(BitVector(mx, s), BitVector.zeros(mz))
    return Syndrome(BitVector.zeros(mx), BitVector(mz, s))


def defect_energy(code: CssCode, error: CssOperator) -> int:
    """Number of violated generators; multiply by 2 for a Hamiltonian energy gap."""
    _check_len(code, error)
    return syndrome_bits(code, error.pauli_type, error.bits).bit_count()


def encoded_qubits(code: CssCode) -> int:
    _require_audit(code)
    return code.n - rank(code.check_matrix(Pauli.X)) - rank(code.check_matrix(Pauli.Z))


def _reduce_support(v: int, moves: Sequence[int]) -> int:
    improved = True
    while improved:
        improved = False
        for s in moves:
            t = v ^ s
            if t.bit_count() < v.bit_count():
                v = t
                improved = True
    return v


def logical_generators(code: CssCode, pauli_type: Pauli | str) -> list[CssOperator]:
    """Independent logical representatives of one type, greedily slimmed.

    A ``pauli_type`` logical lies in the kernel of the dual check matrix and
    outside the same-type stabilizer span.  Each representative is then
    reduced by XOR with generators and echelon rows, in stored order, while
    that lowers its weight.
    """
    pauli = Pauli.parse(pauli_type)
    _require_audit(code)
    basis = RowBasis(code.rows(pauli))
    kernel = kernel_basis(code.check_matrix(pauli.dual))
    picked = [v for v in kernel.data if basis.add(v)]
    moves = code.rows(pauli) + code.stabilizer_basis(pauli).rows()
    return [CssOperator.from_bits(pauli, code.n, _reduce_support(v, moves)) for v in picked]


def restrict(op: CssOperator, qubit_subset: Iterable[int] | int) -> CssOperator:
    """Identity outside ``qubit_subset`` (an index iterable or a packed mask)."""
    keep = qubit_subset if isinstance(qubit_subset, int) else mask_of(qubit_subset)
    return CssOperator(op.pauli_type, op.support.masked(keep))


def classify(code: CssCode, op: CssOperator) -> Classification:
    _check_len(code, op)
    if syndrome_bits(code, op.pauli_type, op.bits):
        return Classification.DETECTABLE
    if op.bits in code.stabilizer_basis(op.pauli_type):
        return Classification.STABILIZER
    return Classification.NONTRIVIAL_LOGICAL


def logical_parities(code: CssCode, pauli: Pauli) -> list[int]:
    """Per qubit, packed overlap with each dual-type logical.

    A syndrome-free ``pauli``-type operator is a stabilizer iff the XOR of
    these columns over its support is zero.
    """
    duals = code.logical_ops(pauli.dual)
    basis = RowBasis(code.rows(pauli.dual))
    if len(duals) != encoded_qubits(code) or not all(basis.add(l.bits) for l in duals):
        raise ValueError(f"stored {pauli.dual.value} logicals are not an independent set of k classes")
    if any(syndrome_bits(code, pauli.dual, l.bits) for l in duals):
        raise ValueError(f"a stored {pauli.dual.value} logical violates a generator")
    cols = [0] * code.n
    for i, l in enumerate(duals):
        for q in bits_of(l.bits):
            cols[q] |= 1 << i
    return cols


def _coset_min(code: CssCode, pauli: Pauli) -> int | None:
    stabs = code.stabilizer_basis(pauli).rows()
    logs = [l.bits for l in code.logical_ops(pauli)]
    best = None
    for mask in range(1, 1 << len(logs)):
        v = 0
        for i in bits_of(mask):
            v ^= logs[i]
        # Gray-code walk over the stabilizer span
        if best is None or v.bit_count() < best.bit_count():
            best = v
        for step in range(1, 1 << len(stabs)):
            v ^= stabs[(step & -step).bit_length() - 1]
            if v.bit_count() < best.bit_count():
                best = v
    return best


def _weight_search(code: CssCode, pauli: Pauli, weight_cap: int, budget: int) -> int | None:
    cols = code.columns(pauli.dual)
    lcols = logical_parities(code, pauli)
    n = code.n
    max_col = max((c.bit_count() for c in cols), default=0)
    nodes = 0

    def dfs(start: int, left: int, syn: int, lpar: int, chosen: int) -> int | None:
        nonlocal nodes
        if left == 0:
            return chosen if syn == 0 and lpar else None
        if syn.bit_count() > left * max_col:
            return None
        for q in range(start, n - left + 1):
            nodes += 1
            if nodes > budget:
                raise SearchBudgetError(f"weight search exceeded {budget} nodes")
            hit = dfs(q + 1, left - 1, syn ^ cols[q], lpar ^ lcols[q], chosen | (1 << q))
            if hit is not None:
                return hit
        return None

    for w in range(1, min(weight_cap, n) + 1):
        hit = dfs(0, w, 0, 0, 0)
        if hit is not None:
            return hit
    return None


def min_weight_logical(
    code: CssCode,
    pauli_type: Pauli | str,
    weight_cap: int = 12,
    budget: int = 2_000_000,
) -> CssOperator | None:
    """A minimum-weight nontrivial logical of one type, or None above ``weight_cap``.

    Enumerates the logical cosets directly when ``(2^k - 1) * 2^rank`` fits in
    ``budget``; otherwise searches supports of increasing weight.  Raises
    :class:`SearchBudgetError` rather than returning a non-minimal answer.
    """
    pauli = Pauli.parse(pauli_type)
    k = encoded_qubits(code)
    if k < 1:
        raise ValueError("code encodes no qubits")
    r = len(code.stabilizer_basis(pauli))
    if ((1 << k) - 1) << r <= budget:
        best = _coset_min(code, pauli)
        if best is None or best.bit_count() > weight_cap:
            return None
    else:
        best = _weight_search(code, pauli, weight_cap, budget)
        if best is None:
            return None
    return CssOperator.from_bits(pauli, code.n, best)


def permute_qubits(code: CssCode, perm: Sequence[int]) -> CssCode:
    """Relabel qubit ``q`` as ``perm[q]``; generator order is kept."""
    if sorted(perm) != list(range(code.n)):
        raise ValueError("not a permutation of the qubit indices")

    def move(op: CssOperator) -> CssOperator:
        return CssOperator.from_indices(op.pauli_type, code.n, (perm[q] for q in op.qubits()))

    qubits = [None] * code.n
    for q, info in enumerate(code.qubits):
        qubits[perm[q]] = QubitInfo(perm[q], info.coords, dict(info.tags))
    logicals = None
    if code.logicals:
        logicals = {p: tuple(move(l) for l in ls) for p, ls in code.logicals.items()}
    return CssCode(
        code.n,
        tuple(move(g) for g in code.x_generators),
        tuple(move(g) for g in code.z_generators),
        tuple(qubits),
        dict(code.metadata),
        logicals,
    )

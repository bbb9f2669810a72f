"""Bit-packed vectors and matrices over GF(2).

Vectors are stored as a single Python integer whose bit ``i`` is entry ``i``.
Python integers are arbitrary-precision word arrays, so XOR and popcount run
word-at-a-time in C, which is all the linear algebra below needs.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Iterator, Sequence


def popcount(x: int) -> int:
    return x.bit_count()


def bits_of(x: int) -> Iterator[int]:
    """Yield the indices of the set bits of ``x`` in increasing order."""
    while x:
        low = x & -x
        yield low.bit_length() - 1
        x ^= low


def mask_of(indices: Iterable[int]) -> int:
    m = 0
    for i in indices:
        m |= 1 << i
    return m


@dataclass(frozen=True)
class BitVector:
    """A GF(2) vector of fixed ``length``; padding bits are always zero."""

    length: int
    bits: int = 0

    def __post_init__(self) -> None:
        if self.length < 0:
            raise ValueError("length must be non-negative")
        if self.bits < 0 or self.bits >> self.length:
            raise ValueError(f"bits set beyond length {self.length}")

    @classmethod
    def zeros(cls, length: int) -> BitVector:
        return cls(length, 0)

    @classmethod
    def from_indices(cls, length: int, indices: Iterable[int]) -> BitVector:
        bits = 0
        for i in indices:
            if not 0 <= i < length:
                raise IndexError(f"index {i} out of range for length {length}")
            bits |= 1 << i
        return cls(length, bits)

    @classmethod
    def from_string(cls, text: str) -> BitVector:
        """Parse ``"1101"``; character ``i`` is entry ``i``."""
        bits = 0
        for i, ch in enumerate(text):
            if ch == "1":
                bits |= 1 << i
            elif ch != "0":
                raise ValueError(f"not a bit string: {text!r}")
        return cls(len(text), bits)

    def __len__(self) -> int:
        return self.length

    def __getitem__(self, i: int) -> int:
        if not 0 <= i < self.length:
            raise IndexError(i)
        return (self.bits >> i) & 1

    def __iter__(self) -> Iterator[int]:
        return (self[i] for i in range(self.length))

    def _check(self, other: BitVector) -> None:
        if other.length != self.length:
            raise ValueError(f"length mismatch: {self.length} vs {other.length}")

    def __xor__(self, other: BitVector) -> BitVector:
        self._check(other)
        return BitVector(self.length, self.bits ^ other.bits)

    def __and__(self, other: BitVector) -> BitVector:
        self._check(other)
        return BitVector(self.length, self.bits & other.bits)

    def __or__(self, other: BitVector) -> BitVector:
        self._check(other)
        return BitVector(self.length, self.bits | other.bits)

    def __bool__(self) -> bool:
        return self.bits != 0

    @property
    def weight(self) -> int:
        return self.bits.bit_count()

    def support(self) -> list[int]:
        return list(bits_of(self.bits))

    def masked(self, keep: int) -> BitVector:
        return BitVector(self.length, self.bits & keep)

    def __str__(self) -> str:
        return "".join(str(b) for b in self)


def overlap_parity(a: BitVector, b: BitVector) -> int:
    """Parity of the common support of ``a`` and ``b``.

    0 means an X-type operator on ``a`` commutes with a Z-type operator on ``b``.
    """
    a._check(b)
    return (a.bits & b.bits).bit_count() & 1


@dataclass(frozen=True)
class Gf2Matrix:
    """Row-major GF(2) matrix; ``data[i]`` is the packed row ``i``."""

    cols: int
    data: tuple[int, ...] = ()

    def __post_init__(self) -> None:
        for r in self.data:
            if r < 0 or r >> self.cols:
                raise ValueError(f"row has bits beyond {self.cols} columns")

    @classmethod
    def from_rows(cls, cols: int, rows: Iterable[BitVector | int | str]) -> Gf2Matrix:
        packed = []
        for r in rows:
            if isinstance(r, str):
                r = BitVector.from_string(r)
            if isinstance(r, BitVector):
                if r.length != cols:
                    raise ValueError(f"row length {r.length} != {cols}")
                r = r.bits
            packed.append(r)
        return cls(cols, tuple(packed))

    @classmethod
    def identity(cls, n: int) -> Gf2Matrix:
        return cls(n, tuple(1 << i for i in range(n)))

    @classmethod
    def zeros(cls, rows: int, cols: int) -> Gf2Matrix:
        return cls(cols, (0,) * rows)

    @property
    def rows(self) -> int:
        return len(self.data)

    def row(self, i: int) -> BitVector:
        return BitVector(self.cols, self.data[i])

    def __iter__(self) -> Iterator[BitVector]:
        return (BitVector(self.cols, r) for r in self.data)

    def apply(self, v: BitVector) -> BitVector:
        """``self @ v``, one output bit per row."""
        if v.length != self.cols:
            raise ValueError(f"length mismatch: {v.length} vs {self.cols}")
        out = 0
        for i, r in enumerate(self.data):
            if (r & v.bits).bit_count() & 1:
                out |= 1 << i
        return BitVector(self.rows, out)

    def __str__(self) -> str:
        return "\n".join(str(BitVector(self.cols, r)) for r in self.data)


class RowBasis:
    """Incrementally maintained reduced row echelon basis.

    Pivots are the lowest set bit of each basis row and no other basis row has
    that bit set, so reducing a vector is a single pass over the pivots.
    """

    def __init__(self, rows: Iterable[int] = ()) -> None:
        self.pivots: dict[int, int] = {}
        for r in rows:
            self.add(r)

    def __len__(self) -> int:
        return len(self.pivots)

    def reduce(self, v: int) -> int:
        for p, row in self.pivots.items():
            if (v >> p) & 1:
                v ^= row
        return v

    def add(self, v: int) -> bool:
        """Insert ``v``; return False if it was already in the span."""
        v = self.reduce(v)
        if not v:
            return False
        p = (v & -v).bit_length() - 1
        for q, row in self.pivots.items():
            if (row >> p) & 1:
                self.pivots[q] = row ^ v
        self.pivots[p] = v
        return True

    def __contains__(self, v: int) -> bool:
        return self.reduce(v) == 0

    def rows(self) -> list[int]:
        return [self.pivots[p] for p in sorted(self.pivots)]


def row_reduce(m: Gf2Matrix) -> Gf2Matrix:
    """Reduced row echelon form with zero rows dropped, rows ordered by pivot."""
    return Gf2Matrix(m.cols, tuple(RowBasis(m.data).rows()))


def rank(m: Gf2Matrix) -> int:
    return len(RowBasis(m.data))


def kernel_basis(m: Gf2Matrix) -> Gf2Matrix:
    """Basis of ``{v : m v = 0}``, one vector per free column (ascending)."""
    basis = RowBasis(m.data)
    out = []
    for f in range(m.cols):
        if f in basis.pivots:
            continue
        v = 1 << f
        for p, row in basis.pivots.items():
            if (row >> f) & 1:
                v |= 1 << p
        out.append(v)
    return Gf2Matrix(m.cols, tuple(out))


def in_rowspace(m: Gf2Matrix, v: BitVector) -> bool:
    if v.length != m.cols:
        raise ValueError(f"length mismatch: {v.length} vs {m.cols}")
    return v.bits in RowBasis(m.data)


def span_equal(a: Sequence[int], b: Sequence[int]) -> bool:
    """True iff the packed row lists ``a`` and ``b`` span the same space."""
    ba, bb = RowBasis(a), RowBasis(b)
    return len(ba) == len(bb) and all(r in ba for r in b)

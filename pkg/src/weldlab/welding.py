"""Welding of two CSS codes on a set of identified qubits.

X generators of the two codes are simply unioned.  Z generators are replaced
by products ``h1 h2 theta(h1)`` of pairs whose restrictions to the shared
qubits agree, where ``theta`` denotes restriction to the shared set.  Because
supports are bit sets, ``h1 h2 theta(h1)`` is ``h1 | h2`` whenever the two
restrictions coincide.

All operators handed to the predicates below live on the merged qubit space:
code 1 keeps its indices, code 2's unshared qubits are appended in order.
"""
from __future__ import annotations

import math
from dataclasses import asdict, dataclass, field
from typing import Any, Iterable, Sequence

from .css import (
    Classification,
    CommutationError,
    CssCode,
    CssOperator,
    Pauli,
    QubitInfo,
    classify,
    commutation_audit,
    encoded_qubits,
    logical_generators,
)
from .gf2 import Gf2Matrix, RowBasis, bits_of, kernel_basis, mask_of


class WeldError(ValueError):
    """Invalid weld input (bad identification, non-commuting code)."""


class WeldHypothesisError(WeldError):
    """Raised when a quantity is only defined under the welding hypotheses."""


class FrameMismatchError(WeldError):
    """Identified qubits carry different coordinates in the two codes."""


@dataclass(frozen=True)
class WeldIdentification:
    """Injective map from code-2 qubit ids to code-1 qubit ids."""

    n1: int
    n2: int
    mapping: dict[int, int] = field(default_factory=dict)

    def __post_init__(self) -> None:
        seen = set()
        for q2, q1 in self.mapping.items():
            if not 0 <= q2 < self.n2:
                raise WeldError(f"code-2 qubit {q2} out of range")
            if not 0 <= q1 < self.n1:
                raise WeldError(f"code-1 qubit {q1} out of range")
            if q1 in seen:
                raise WeldError(f"code-1 qubit {q1} identified twice")
            seen.add(q1)

    @property
    def shared(self) -> list[int]:
        """The shared qubits, as merged-space (= code-1) indices."""
        return sorted(self.mapping.values())

    def layout(self) -> WeldLayout:
        map2 = []
        nxt = self.n1
        for q in range(self.n2):
            if q in self.mapping:
                map2.append(self.mapping[q])
            else:
                map2.append(nxt)
                nxt += 1
        return WeldLayout(self.n1, self.n2, nxt, tuple(map2))


@dataclass(frozen=True)
class WeldLayout:
    n1: int
    n2: int
    n3: int
    map2: tuple[int, ...]

    @property
    def q1_mask(self) -> int:
        return (1 << self.n1) - 1

    @property
    def q2_mask(self) -> int:
        return mask_of(self.map2)

    @property
    def shared_mask(self) -> int:
        return self.q1_mask & self.q2_mask

    def lift2(self, bits: int) -> int:
        out = 0
        for q in bits_of(bits):
            out |= 1 << self.map2[q]
        return out

    def pull2(self, bits: int) -> int:
        """Restriction to code-2 qubits, expressed in code-2 indices."""
        out = 0
        for q, m in enumerate(self.map2):
            if (bits >> m) & 1:
                out |= 1 << q
        return out

    def lift_op(self, op: CssOperator, side: int) -> CssOperator:
        bits = op.bits if side == 1 else self.lift2(op.bits)
        return CssOperator.from_bits(op.pauli_type, self.n3, bits)


@dataclass(frozen=True)
class WeldCounts:
    n1: int
    n2: int
    m: int
    k: int


@dataclass
class WeldReport:
    """Outcome of checking the welding hypotheses on one binary weld.

    ``well_matched_H`` and ``independent_H1``/``independent_H2`` refer to the
    combined sets of Z generators and Z logicals; the ``_L`` fields refer to
    the logicals alone.  ``width_bound_ok`` is None when no common frame of
    coordinates is available or the locality hypotheses fail.
    """

    well_matched_H: bool
    well_matched_L: bool
    independent_H1: bool
    independent_H2: bool
    independent_L1: bool
    independent_L2: bool
    width_bound_ok: bool | None
    k_formula: WeldCounts
    k_rank: int
    shared: int
    dropped_generators: int
    restrictions_independent: bool = True
    metric: str = "euclidean"

    @property
    def count_consistent(self) -> bool:
        return self.k_formula.k == self.k_rank

    @property
    def hypotheses_hold(self) -> bool:
        return (
            self.well_matched_H
            and self.well_matched_L
            and self.independent_H1
            and self.independent_H2
            and self.independent_L1
            and self.independent_L2
        )

    def to_dict(self) -> dict[str, Any]:
        d = asdict(self)
        d["hypotheses_hold"] = self.hypotheses_hold
        d["count_consistent"] = self.count_consistent
        return d


def _mask(shared: Iterable[int] | int) -> int:
    return shared if isinstance(shared, int) else mask_of(shared)


def check_well_matched(
    set_a: Sequence[CssOperator], set_b: Sequence[CssOperator], shared: Iterable[int] | int
) -> bool:
    """Every nontrivial shared restriction in one set occurs in the other.

    Members acting trivially on the shared qubits are matched by the identity,
    which every generated group contains.
    """
    m = _mask(shared)
    types = {op.pauli_type for op in list(set_a) + list(set_b)}
    if len(types) > 1:
        raise ValueError("well-matchedness compares sets of one Pauli type")
    ra = {op.bits & m for op in set_a} - {0}
    rb = {op.bits & m for op in set_b} - {0}
    return ra == rb


def check_independent_on_weld(gen_set: Sequence[CssOperator], shared: Iterable[int] | int) -> bool:
    """No nonempty product of the shared-supported members is the identity."""
    m = _mask(shared)
    touching = [op.bits for op in gen_set if op.bits & m]
    return len(RowBasis(touching)) == len(touching)


def check_independent_restrictions(gen_set: Sequence[CssOperator], shared: Iterable[int] | int) -> bool:
    """Stricter variant: the shared-qubit restrictions themselves are independent.

    :func:`check_independent_on_weld` only forbids products equal to the
    identity on every qubit.  This one forbids products that are the identity
    on the shared qubits, which rules out a stabilizer and a logical meeting
    the weld in the same pattern.
    """
    m = _mask(shared)
    touching = [op.bits & m for op in gen_set if op.bits & m]
    return len(RowBasis(touching)) == len(touching)


def _welded_products(
    ops1: Sequence[int], ops2: Sequence[int], shared: int
) -> tuple[list[int], int]:
    """Welded products over the merged space, plus the unmatched count.

    Members with trivial shared restriction pass through.  Every pair with a
    common nontrivial restriction contributes ``h1 | h2``; pairs are emitted
    with ``h1`` in input order and ``h2`` ascending.
    """
    by_restriction: dict[int, list[int]] = {}
    for h2 in ops2:
        r = h2 & shared
        if r:
            by_restriction.setdefault(r, []).append(h2)
    out = []
    dropped = 0
    matched2: set[int] = set()
    for h1 in ops1:
        r = h1 & shared
        if not r:
            out.append(h1)
            continue
        partners = by_restriction.get(r)
        if not partners:
            dropped += 1
            continue
        matched2.add(r)
        out.extend(h1 | h2 for h2 in partners)
    for h2 in ops2:
        r = h2 & shared
        if not r:
            out.append(h2)
        elif r not in matched2:
            dropped += 1
    return out, dropped


def weld_logicals(
    l1_set: Sequence[CssOperator], l2_set: Sequence[CssOperator], ident: WeldIdentification
) -> list[CssOperator]:
    """Welded logicals ``l1 l2 theta(l1)`` on the merged space."""
    layout = ident.layout()
    types = {op.pauli_type for op in list(l1_set) + list(l2_set)}
    pauli = types.pop() if types else Pauli.Z
    ops, _ = _welded_products(
        [l.bits for l in l1_set], [layout.lift2(l.bits) for l in l2_set], layout.shared_mask
    )
    return [CssOperator.from_bits(pauli, layout.n3, b) for b in ops]


def _merge_tags(a: dict[str, Any], b: dict[str, Any]) -> dict[str, Any]:
    out = dict(a)
    for key, val in b.items():
        if key not in out:
            out[key] = val
        elif isinstance(out[key], list) and isinstance(val, list):
            out[key] = out[key] + val
    return out


def _merged_qubits(code1: CssCode, code2: CssCode, layout: WeldLayout) -> tuple[QubitInfo, ...]:
    infos: list[QubitInfo | None] = list(code1.qubits) + [None] * (layout.n3 - layout.n1)
    for q2, m in enumerate(layout.map2):
        other = code2.qubits[q2]
        if m < layout.n1:
            base = infos[m]
            infos[m] = QubitInfo(m, base.coords, _merge_tags(base.tags, other.tags))
        else:
            infos[m] = QubitInfo(m, other.coords, dict(other.tags))
    return tuple(infos)


def _pick_logicals(code: CssCode, pauli: Pauli, candidates: Sequence[CssOperator], k: int):
    basis = RowBasis(code.rows(pauli))
    picked = []
    for c in candidates:
        if len(picked) == k:
            break
        if classify(code, c) is Classification.NONTRIVIAL_LOGICAL and basis.add(c.bits):
            picked.append(c)
    if len(picked) < k:
        for c in logical_generators(code, pauli):
            if len(picked) == k:
                break
            if basis.add(c.bits):
                picked.append(c)
    return tuple(picked)


def _hypotheses(code1: CssCode, code2: CssCode, layout: WeldLayout):
    shared = layout.shared_mask
    z1 = [CssOperator.from_bits(Pauli.Z, layout.n3, b) for b in code1.rows(Pauli.Z)]
    z2 = [CssOperator.from_bits(Pauli.Z, layout.n3, layout.lift2(b)) for b in code2.rows(Pauli.Z)]
    l1 = [layout.lift_op(l, 1) for l in code1.logical_ops(Pauli.Z)]
    l2 = [layout.lift_op(l, 2) for l in code2.logical_ops(Pauli.Z)]
    return shared, z1, z2, l1, l2


def weld_pair(
    code1: CssCode, code2: CssCode, ident: WeldIdentification
) -> tuple[CssCode, WeldReport]:
    """Weld ``code2`` onto ``code1`` along ``ident``.

    Hypothesis failures do not abort: the result always commutes (audited),
    but the report then voids the generating-set guarantees.
    """
    if ident.n1 != code1.n or ident.n2 != code2.n:
        raise WeldError("identification sized for different codes")
    for c in (code1, code2):
        if not commutation_audit(c):
            raise WeldError("input code fails the commutation audit")
    layout = ident.layout()
    shared, z1, z2, l1, l2 = _hypotheses(code1, code2, layout)

    x_gens = [CssOperator.from_bits(Pauli.X, layout.n3, b) for b in code1.rows(Pauli.X)]
    x_gens += [CssOperator.from_bits(Pauli.X, layout.n3, layout.lift2(b)) for b in code2.rows(Pauli.X)]
    z_bits, dropped = _welded_products([h.bits for h in z1], [h.bits for h in z2], shared)
    z_gens = [CssOperator.from_bits(Pauli.Z, layout.n3, b) for b in z_bits]

    meta: dict[str, Any] = {"builder": "weld"}
    b1 = code1.metadata.get("x_generator_blocks")
    b2 = code2.metadata.get("x_generator_blocks")
    if b1 is not None and b2 is not None:
        meta["x_generator_blocks"] = list(b1) + list(b2)
    welded = CssCode(layout.n3, tuple(x_gens), tuple(z_gens), _merged_qubits(code1, code2, layout), meta)
    if not commutation_audit(welded):
        raise CommutationError("welded generators fail the commutation audit")
    k = encoded_qubits(welded)

    z_cands = weld_logicals(code1.logical_ops(Pauli.Z), code2.logical_ops(Pauli.Z), ident)
    x_cands = [layout.lift_op(l, 1) for l in code1.logical_ops(Pauli.X)]
    x_cands += [layout.lift_op(l, 2) for l in code2.logical_ops(Pauli.X)]
    welded = CssCode(
        welded.n,
        welded.x_generators,
        welded.z_generators,
        welded.qubits,
        meta,
        {Pauli.Z: _pick_logicals(welded, Pauli.Z, z_cands, k), Pauli.X: _pick_logicals(welded, Pauli.X, x_cands, k)},
    )

    report = WeldReport(
        well_matched_H=check_well_matched(z1 + l1, z2 + l2, shared),
        well_matched_L=check_well_matched(l1, l2, shared),
        independent_H1=check_independent_on_weld(z1 + l1, shared),
        independent_H2=check_independent_on_weld(z2 + l2, shared),
        independent_L1=check_independent_on_weld(l1, shared),
        independent_L2=check_independent_on_weld(l2, shared),
        width_bound_ok=None,
        k_formula=_counts(l1, l2, shared),
        k_rank=k,
        shared=len(ident.mapping),
        dropped_generators=dropped,
        restrictions_independent=check_independent_restrictions(z1 + l1, shared)
        and check_independent_restrictions(z2 + l2, shared),
    )
    try:
        report.width_bound_ok = verify_locality_corollary(code1, code2, ident, welded)
    except (FrameMismatchError, ValueError):
        report.width_bound_ok = None
    return welded, report


def _counts(l1: Sequence[CssOperator], l2: Sequence[CssOperator], shared: int) -> WeldCounts:
    n1 = sum(1 for l in l1 if not l.bits & shared)
    n2 = sum(1 for l in l2 if not l.bits & shared)
    r2: dict[int, int] = {}
    for l in l2:
        if l.bits & shared:
            r2[l.bits & shared] = r2.get(l.bits & shared, 0) + 1
    m = sum(r2.get(l.bits & shared, 0) for l in l1 if l.bits & shared)
    return WeldCounts(n1, n2, m, n1 + n2 + m)


def encoded_count_formula(code1: CssCode, code2: CssCode, ident: WeldIdentification) -> WeldCounts:
    """``(n1, n2, m, n1 + n2 + m)`` from the codes' Z logicals.

    ``n1``/``n2`` count logicals missing the shared qubits, ``m`` counts
    matched pairs of shared-supported ones.  The hypothesis checks do not by
    themselves guarantee the count: when a stabilizer and a logical restrict to
    the same shared pattern the welded code can carry extra logicals, so
    compare with ``WeldReport.k_rank``.
    """
    layout = ident.layout()
    shared, z1, z2, l1, l2 = _hypotheses(code1, code2, layout)
    ok = (
        check_well_matched(z1 + l1, z2 + l2, shared)
        and check_well_matched(l1, l2, shared)
        and check_independent_on_weld(z1 + l1, shared)
        and check_independent_on_weld(z2 + l2, shared)
        and check_independent_on_weld(l1, shared)
        and check_independent_on_weld(l2, shared)
    )
    if not ok:
        raise WeldHypothesisError("welding hypotheses fail; the count formula does not apply")
    return _counts(l1, l2, shared)


def s3z_membership(
    code1: CssCode, code2: CssCode, ident: WeldIdentification, candidate: CssOperator
) -> bool:
    """Both restrictions of ``candidate`` are Z stabilizers of their codes."""
    layout = ident.layout()
    if candidate.pauli_type is not Pauli.Z or candidate.n != layout.n3:
        raise ValueError("candidate must be a Z-type operator on the merged space")
    on1 = candidate.bits & layout.q1_mask
    on2 = layout.pull2(candidate.bits)
    return on1 in code1.stabilizer_basis(Pauli.Z) and on2 in code2.stabilizer_basis(Pauli.Z)


def welded_z_space(code1: CssCode, code2: CssCode, ident: WeldIdentification) -> list[int]:
    """Basis of ``{h : theta1(h) in S1^Z, theta2(h) in S2^Z}`` by linear algebra.

    Membership in a span is orthogonality to the span's annihilator, so the
    space is the kernel of the stacked, lifted annihilators of both codes.
    """
    layout = ident.layout()
    constraints = list(kernel_basis(code1.check_matrix(Pauli.Z)).data)
    constraints += [layout.lift2(v) for v in kernel_basis(code2.check_matrix(Pauli.Z)).data]
    return list(kernel_basis(Gf2Matrix(layout.n3, tuple(constraints))).data)


def width(ops: Iterable[CssOperator], coords: Sequence[Sequence[float] | None]) -> float:
    """Largest Euclidean distance between two qubits of any one operator."""
    best = 0.0
    for op in ops:
        pts = []
        for q in op.qubits():
            c = coords[q]
            if c is None:
                raise ValueError(f"qubit {q} has no coordinate")
            pts.append(c)
        for i in range(len(pts)):
            for j in range(i + 1, len(pts)):
                best = max(best, math.dist(pts[i], pts[j]))
    return best


def verify_locality_corollary(
    code1: CssCode, code2: CssCode, ident: WeldIdentification, welded: CssCode
) -> bool | None:
    """Check the width bound for a binary weld sharing one coordinate frame.

    Returns None (not applicable) when the Z generating sets are not well
    matched and independent on the weld.
    """
    layout = ident.layout()
    shared, z1, z2, _, _ = _hypotheses(code1, code2, layout)
    if not (
        check_well_matched(z1, z2, shared)
        and check_independent_on_weld(z1, shared)
        and check_independent_on_weld(z2, shared)
    ):
        return None
    c1, c2, c3 = code1.coords, code2.coords, welded.coords
    for q2, q1 in ident.mapping.items():
        if c1[q1] is None or c1[q1] != c2[q2]:
            raise FrameMismatchError(f"code-2 qubit {q2} and code-1 qubit {q1} disagree on position")
    for q, m in enumerate(layout.map2):
        if c3[m] != c2[q]:
            raise FrameMismatchError("welded coordinates differ from the input frames")
    w1 = width(code1.x_generators + code1.z_generators, c1)
    w2 = width(code2.x_generators + code2.z_generators, c2)
    w3 = width(welded.x_generators + welded.z_generators, c3)
    return w3 <= w1 + w2 + 1e-9


def swap_pauli_types(code: CssCode) -> CssCode:
    """Exchange the roles of X and Z, for welding on the X sector."""

    def flip(op: CssOperator) -> CssOperator:
        return CssOperator(op.pauli_type.dual, op.support)

    logicals = None
    if code.logicals:
        logicals = {p.dual: tuple(flip(l) for l in ls) for p, ls in code.logicals.items()}
    return CssCode(
        code.n,
        tuple(flip(g) for g in code.z_generators),
        tuple(flip(g) for g in code.x_generators),
        code.qubits,
        dict(code.metadata),
        logicals,
    )

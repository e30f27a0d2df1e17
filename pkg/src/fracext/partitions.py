"""Canonical precolorings and pseudorandom partitions of [0, k+eps).

A pseudorandom partition splits the span into p parts f_o(1..p) of equal
measure and carves p parts f_e(1..p) of measure 1/q each, so that every
precolor set meets every part in exactly its proportional share.  The
construction splits every atom of the set algebra generated by the
precolor sets proportionally, which forces all intersection equalities at
once.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, List, Sequence

from .measure import IntervalSet, as_fraction, carve, union_all

MAX_ATOMS = 100_000


@dataclass(frozen=True)
class Precoloring:
    sets: List[IntervalSet]
    span: Fraction
    labels: List[tuple] = field(default_factory=list)

    def __len__(self) -> int:
        return len(self.sets)

    def __getitem__(self, i: int) -> IntervalSet:
        return self.sets[i]


@dataclass
class PseudoRandomPartition:
    f_o: List[IntervalSet]
    f_e: List[IntervalSet]
    Y: IntervalSet
    p: int
    q: int
    eps: Fraction

    @property
    def k(self) -> Fraction:
        return Fraction(self.p, self.q)

    @property
    def span(self) -> Fraction:
        return self.k + self.eps

    def fo(self, elements: Sequence[int]) -> IntervalSet:
        """Union of f_o over 1-based elements."""
        return union_all(self.f_o[a - 1] for a in elements)

    def fe(self, elements: Sequence[int]) -> IntervalSet:
        return union_all(self.f_e[a - 1] for a in elements)

    def to_json(self) -> dict:
        return {
            "f_o": [s.to_text() for s in self.f_o],
            "f_e": [s.to_text() for s in self.f_e],
            "Y": self.Y.to_text(),
        }


class PartitionError(ValueError):
    pass


def canonical_precoloring(p_prime: int, q: int) -> Precoloring:
    """One set per q-subset X of [p'], namely the union of [(i-1)/q, i/q) over i in X."""
    if q < 1 or p_prime < 2 * q:
        raise ValueError(f"canonical precoloring needs p' >= 2q, got p'={p_prime}, q={q}")
    sets = []
    labels = []
    for X in itertools.combinations(range(1, p_prime + 1), q):
        sets.append(IntervalSet([(Fraction(i - 1, q), Fraction(i, q)) for i in X]))
        labels.append(X)
    return Precoloring(sets, Fraction(p_prime, q), labels)


def atoms(sets: Sequence[IntervalSet], span: Fraction) -> List[IntervalSet]:
    """Atoms of the set algebra generated by `sets` inside [0, span)."""
    cuts = {Fraction(0), span}
    for s in sets:
        for a, b in s.intervals:
            cuts.add(a)
            cuts.add(b)
    points = sorted(c for c in cuts if 0 <= c <= span)
    groups: Dict[tuple, List[tuple]] = {}
    order = []
    for a, b in zip(points, points[1:]):
        mid = (a + b) / 2
        sig = tuple(i for i, s in enumerate(sets) if _contains(s, mid))
        if sig not in groups:
            groups[sig] = []
            order.append(sig)
            if len(order) > MAX_ATOMS:
                raise PartitionError(f"precoloring generates more than {MAX_ATOMS} atoms")
        groups[sig].append((a, b))
    return [IntervalSet(groups[sig]) for sig in order]


def _contains(S: IntervalSet, x: Fraction) -> bool:
    lo, hi = 0, len(S.intervals)
    iv = S.intervals
    while lo < hi:
        mid = (lo + hi) // 2
        if iv[mid][1] <= x:
            lo = mid + 1
        else:
            hi = mid
    return lo < len(iv) and iv[lo][0] <= x


def _split_equal(S: IntervalSet, n: int) -> List[IntervalSet]:
    share = S.measure() / n
    out = []
    rest = S
    for _ in range(n - 1):
        piece = carve(rest, share)
        out.append(piece)
        rest = rest - piece
    out.append(rest)
    return out


def build_pseudorandom(C: Precoloring, p: int, q: int, eps) -> PseudoRandomPartition:
    eps = as_fraction(eps)
    if eps < 0:
        raise PartitionError("eps must be non-negative")
    span = Fraction(p, q) + eps
    for i, s in enumerate(C.sets):
        if s and (s.lower() < 0 or s.upper() > span):
            raise PartitionError(f"precolor set {i} leaves the span [0, {span})")
    k = Fraction(p, q)
    fo_parts: List[List[IntervalSet]] = [[] for _ in range(p)]
    fe_parts: List[List[IntervalSet]] = [[] for _ in range(p)]
    for atom in atoms(C.sets, span):
        for i, piece in enumerate(_split_equal(atom, p)):
            fo_parts[i].append(piece)
        used = carve(atom, atom.measure() * k / span)
        for i, piece in enumerate(_split_equal(used, p)):
            fe_parts[i].append(piece)
    f_o = [union_all(ps) for ps in fo_parts]
    f_e = [union_all(ps) for ps in fe_parts]
    Y = IntervalSet.interval(0, span) - union_all(f_e)
    return PseudoRandomPartition(f_o, f_e, Y, p, q, eps)


def restrict_fo(part: PseudoRandomPartition, C_i: IntervalSet, variant: str) -> List[IntervalSet]:
    """Subsets of f_o(j) of measure 1/q meeting C_i in 1/p ("d1") or (1-eps)/p ("d3")."""
    p, q, eps = part.p, part.q, part.eps
    if variant in ("d1", "d≡1"):
        target = Fraction(1, p)
    elif variant in ("d3", "d≡3"):
        if eps > 1:
            raise PartitionError("the d3 variant needs eps <= 1")
        target = (1 - eps) / p
    else:
        raise ValueError(f"unknown variant {variant!r}")
    out = []
    for j, fo in enumerate(part.f_o):
        inside = fo & C_i
        outside = fo - C_i
        rest = Fraction(1, q) - target
        if target > inside.measure():
            raise PartitionError(f"f_o({j + 1}) meets C_i in {inside.measure()} < {target}")
        if rest > outside.measure():
            raise PartitionError(
                f"f_o({j + 1}) outside C_i has {outside.measure()} < {rest} = (k-1)/p bound")
        out.append(carve(inside, target) | carve(outside, rest))
    return out


def verify_pseudorandom(part: PseudoRandomPartition, C: Precoloring) -> List[str]:
    """Every violated equality, with its exact residual."""
    p, q, eps = part.p, part.q, part.eps
    span = part.span
    whole = IntervalSet.interval(0, span)
    report = []

    def pairwise(name: str, sets: List[IntervalSet]) -> None:
        for i in range(len(sets)):
            for j in range(i + 1, len(sets)):
                ov = sets[i] & sets[j]
                if ov:
                    report.append(f"{name}({i + 1}) and {name}({j + 1}) overlap on {ov.to_text()}")

    if len(part.f_o) != p or len(part.f_e) != p:
        report.append("wrong number of parts")
    pairwise("f_o", part.f_o)
    pairwise("f_e", part.f_e)
    if union_all(part.f_o) != whole:
        report.append("f_o does not cover [0, k+eps)")
    for name, sets in (("f_o", part.f_o), ("f_e", part.f_e)):
        for i, s in enumerate(sets):
            if not s.issubset(whole):
                report.append(f"{name}({i + 1}) leaves the span")
    for i, s in enumerate(part.f_o):
        r = s.measure() - span / p
        if r:
            report.append(f"|f_o({i + 1})| residual {r}")
    for i, s in enumerate(part.f_e):
        r = s.measure() - Fraction(1, q)
        if r:
            report.append(f"|f_e({i + 1})| residual {r}")
    if part.Y != whole - union_all(part.f_e):
        report.append("Y is not the complement of the f_e parts")
    if part.Y.measure() != eps:
        report.append(f"|Y| residual {part.Y.measure() - eps}")
    for a, Ca in enumerate(C.sets):
        for i in range(p):
            r = (part.f_o[i] & Ca).measure() - Fraction(1, p)
            if r:
                report.append(f"|f_o({i + 1}) & C_{a + 1}| residual {r}")
            r = (part.f_e[i] & Ca).measure() - 1 / (p + q * eps)
            if r:
                report.append(f"|f_e({i + 1}) & C_{a + 1}| residual {r}")
    return report

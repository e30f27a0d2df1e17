"""Closed forms for g(k,d), the least extra span that makes every distance-d
precoloring extendable, with provenance labels.

Each formula is a `Piece`: an interval of k together with a polynomial in eps
whose coefficients depend on k; the value is the polynomial's positive root.
Keeping the polynomial around is what makes one-sided limits exact.
"""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Iterable, List, Optional, Sequence, Tuple

from .algebraic import AlgebraicNumber
from .measure import as_fraction

PROVENANCES = ("proved", "conjectured", "upper_bound_only")

Coeffs = Callable[[Fraction], List[Fraction]]


class OutOfRange(ValueError):
    """No formula of the requested kind covers (k, d)."""


@dataclass(frozen=True)
class GValue:
    value: AlgebraicNumber
    provenance: str
    source: str

    def __post_init__(self):
        if self.provenance not in PROVENANCES:
            raise ValueError(f"unknown provenance {self.provenance!r}")

    def decimal(self, places: int = 5) -> str:
        return self.value.decimal(places)

    def __float__(self) -> float:
        return float(self.value)


@dataclass(frozen=True)
class Piece:
    lo: Fraction
    hi: Optional[Fraction]  # None: unbounded; the interval is [lo, hi)
    coeffs: Coeffs  # constant term first
    provenance: str
    source: str

    def covers(self, k: Fraction) -> bool:
        return self.lo <= k and (self.hi is None or k < self.hi)

    def value(self, k: Fraction) -> AlgebraicNumber:
        c = self.coeffs(k)
        if len(c) == 2:
            return AlgebraicNumber.rational(-c[0] / c[1])
        return AlgebraicNumber.positive_root(c)


def _base_coeffs(d: int) -> Coeffs:
    dp = d // 4
    r = d % 4
    if r == 0:
        return lambda k: [-(k - 1), dp * k - 1, Fraction(dp)]
    if r == 1:
        return lambda k: [-(k - 1), dp * k]
    if r == 2:
        return lambda k: [-(k - 1), dp * k, Fraction(dp)]
    return lambda k: [-(k - 1), dp * k + k - 1]


def _check_d(d: int, least: int = 3) -> None:
    if not isinstance(d, int) or d < least:
        raise OutOfRange(f"d must be an integer >= {least}, got {d!r}")


def _k(k) -> Fraction:
    k = as_fraction(k)
    if k < 2:
        raise OutOfRange(f"k must be at least 2, got {k}")
    return k


TWO, FIVE_HALVES, THREE = Fraction(2), Fraction(5, 2), Fraction(3)


def _pieces(d: int) -> List[Piece]:
    """Every known formula for this d, proved ones first."""
    base = _base_coeffs(d)
    out = []
    if d == 3:
        out.append(Piece(TWO, None, base, "proved", "base formula, d=3"))
    else:
        out.append(Piece(TWO, Fraction(201, 100), base, "proved", "base formula, k=2"))
        out.append(Piece(THREE, None, base, "proved", "base formula, k>=3"))
    if d == 4:
        out.append(Piece(TWO, THREE, lambda k: [Fraction(-1), k - 1, Fraction(1)], "proved", "d=4 formula"))
    if d == 6:
        out.append(Piece(FIVE_HALVES, THREE, lambda k: [Fraction(-1), k, Fraction(1)], "proved",
                         "d=6 formula for k in [2.5,3)"))
    if d == 5:
        out.append(Piece(TWO, THREE, lambda k: [Fraction(-1), k], "conjectured", "d=5 conjecture"))
    if d == 6:
        out.append(Piece(TWO, FIVE_HALVES, lambda k: [Fraction(-1), k * (k - 1), k - 1], "conjectured",
                         "d=6 conjecture for k<2.5"))
    if d == 7:
        out.append(Piece(TWO, FIVE_HALVES, lambda k: [Fraction(-1), k * k - k + 1], "conjectured",
                         "d=7 conjecture for k<2.5"))
        out.append(Piece(FIVE_HALVES, THREE, lambda k: [Fraction(-1), k + 1], "conjectured",
                         "d=7 conjecture for k in [2.5,3)"))
    if d >= 8:
        out.append(_construction_piece(d))
    return out


def _construction_piece(d: int) -> Piece:
    """Upper bound from the explicit construction for this residue class of d."""
    from .colorizer import CaseTag, condition_polynomial

    dp = d // 4
    case = {0: CaseTag.D0, 1: CaseTag.D1, 2: CaseTag.D2, 3: CaseTag.D3}[d % 4]
    width = 2 * dp - 1 if d % 4 in (0, 1) else 2 * dp
    return Piece(TWO, TWO + Fraction(1, width), lambda k: condition_polynomial(case, k, d),
                 "upper_bound_only", f"construction bound, d={d}")


def _pick(d: int, k: Fraction, provenance: Sequence[str]) -> Piece:
    for piece in _pieces(d):
        if piece.provenance in provenance and piece.covers(k):
            return piece
    raise OutOfRange(f"no {'/'.join(provenance)} formula for k={k}, d={d}")


def _gvalue(piece: Piece, k: Fraction) -> GValue:
    return GValue(piece.value(k), piece.provenance, piece.source)


def g_base(k, d: int) -> GValue:
    """Proved formula for k in {2} or k >= 3 (any k >= 2 when d = 3)."""
    _check_d(d)
    k = _k(k)
    if d != 3 and k != 2 and k < 3:
        raise OutOfRange(f"base formula needs k = 2 or k >= 3, got {k}")
    return _gvalue(_pieces(d)[0 if d == 3 or k == 2 else 1], k)


def g_new(k, d: int) -> GValue:
    """Proved values for d=4, k in [2,3) and d=6, k in [2.5,3) (k=2 as well)."""
    _check_d(d)
    k = _k(k)
    if d == 4 and k < 3 or d == 6 and (k == 2 or FIVE_HALVES <= k < 3):
        coeffs = [Fraction(-1), k - 1 if d == 4 else k, Fraction(1)]
        src = "d=4 formula" if d == 4 else "d=6 formula for k in [2.5,3)"
        return GValue(AlgebraicNumber.positive_root(coeffs), "proved", src)
    raise OutOfRange(f"no proved formula beyond the base case at k={k}, d={d}")


def g_conjectured(k, d: int) -> GValue:
    if d not in (5, 6, 7):
        raise OutOfRange(f"conjectures cover d in 5..7, got {d}")
    return _gvalue(_pick(d, _k(k), ("conjectured",)), _k(k))


def g_best_known(k, d: int) -> GValue:
    """Proved value if one exists, else the conjecture, else a construction upper bound."""
    _check_d(d)
    k = _k(k)
    for prov in PROVENANCES:
        try:
            return _gvalue(_pick(d, k, (prov,)), k)
        except OutOfRange:
            continue
    raise OutOfRange(f"nothing known for k={k}, d={d}")


@dataclass(frozen=True)
class DiscontinuityPoint:
    k: Fraction
    left: Optional[GValue]  # limit from below, None when no formula covers a left neighbourhood
    right: Optional[GValue]  # value at k, equal to the limit from above

    @property
    def gap(self) -> Optional[bool]:
        if self.left is None or self.right is None:
            return None
        return self.left.value != self.right.value


def _one_sided(d: int, k: Fraction, side: int) -> Optional[GValue]:
    # breakpoints of distinct pieces are at least 1/12 apart for the d we handle
    probe = k + side * Fraction(1, 10**6)
    for prov in PROVENANCES:
        for piece in _pieces(d):
            if piece.provenance == prov and piece.covers(probe):
                return _gvalue(piece, k)
    return None


def discontinuity_report(d: int) -> List[DiscontinuityPoint]:
    """The points 2 + 1/m, m = 1 .. floor(d/2)-1, with the best-known one-sided values."""
    _check_d(d, 4)
    out = []
    for m in range(1, d // 2):
        k = 2 + Fraction(1, m)
        out.append(DiscontinuityPoint(k, _one_sided(d, k, -1), _one_sided(d, k, +1)))
    return out


CSV_COLUMNS = ("k", "d", "value_5dp", "provenance", "source")


def gvalue_csv(points: Iterable[Tuple[object, int]]) -> str:
    """CSV rows for (k, d) pairs; pairs with no known value are skipped."""
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(CSV_COLUMNS)
    for k, d in points:
        try:
            g = g_best_known(k, d)
        except OutOfRange:
            continue
        w.writerow([str(as_fraction(k)), d, g.decimal(5), g.provenance, g.source])
    return buf.getvalue()

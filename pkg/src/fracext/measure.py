"""Exact interval-set algebra over the rationals.

Every set is a finite union of half-open intervals [a, b) with Fraction
endpoints, stored in a canonical form (sorted, disjoint, non-adjacent), so
two equal sets always have identical representations.
"""

from __future__ import annotations

from decimal import Decimal
from fractions import Fraction
from math import gcd
from typing import Iterable, Iterator, List, Sequence, Tuple, Union

RationalLike = Union[int, Fraction, str, Decimal]


class CarveError(ValueError):
    """Raised when a carve asks for more measure than the set holds."""

    def __init__(self, requested: Fraction, available: Fraction, context: str = ""):
        self.requested = requested
        self.available = available
        self.deficit = requested - available
        self.context = context
        msg = f"carve deficit {self.deficit} (requested {requested}, available {available})"
        if context:
            msg += f" [{context}]"
        super().__init__(msg)


def as_fraction(x: RationalLike) -> Fraction:
    """Convert ints, Fractions, Decimals and strings exactly. Floats are refused."""
    if isinstance(x, bool):
        raise TypeError("booleans are not rationals")
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, Decimal):
        return Fraction(x)
    if isinstance(x, str):
        s = x.strip()
        if "/" in s:
            num, den = s.split("/", 1)
            return Fraction(int(num), int(den))
        return Fraction(Decimal(s))
    raise TypeError(f"cannot convert {type(x).__name__} to an exact rational")


def _normalize(pairs: Iterable[Tuple[Fraction, Fraction]]) -> Tuple[Tuple[Fraction, Fraction], ...]:
    items = sorted((a, b) for a, b in pairs if a < b)
    out: List[Tuple[Fraction, Fraction]] = []
    for a, b in items:
        if out and a <= out[-1][1]:
            if b > out[-1][1]:
                out[-1] = (out[-1][0], b)
        else:
            out.append((a, b))
    return tuple(out)


class IntervalSet:
    __slots__ = ("_iv", "_hash")

    def __init__(self, pairs: Iterable[Tuple[RationalLike, RationalLike]] = ()):
        self._iv = _normalize((as_fraction(a), as_fraction(b)) for a, b in pairs)
        self._hash = None

    @classmethod
    def _raw(cls, iv: Tuple[Tuple[Fraction, Fraction], ...]) -> "IntervalSet":
        # iv must already be canonical
        obj = cls.__new__(cls)
        obj._iv = iv
        obj._hash = None
        return obj

    @classmethod
    def interval(cls, a: RationalLike, b: RationalLike) -> "IntervalSet":
        return cls([(a, b)])

    @property
    def intervals(self) -> Tuple[Tuple[Fraction, Fraction], ...]:
        return self._iv

    def __iter__(self) -> Iterator[Tuple[Fraction, Fraction]]:
        return iter(self._iv)

    def __len__(self) -> int:
        return len(self._iv)

    def __bool__(self) -> bool:
        return bool(self._iv)

    def __eq__(self, other: object) -> bool:
        return isinstance(other, IntervalSet) and self._iv == other._iv

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash(self._iv)
        return self._hash

    def __repr__(self) -> str:
        if not self._iv:
            return "IntervalSet()"
        return "IntervalSet(" + " u ".join(f"[{a},{b})" for a, b in self._iv) + ")"

    def measure(self) -> Fraction:
        return sum((b - a for a, b in self._iv), Fraction(0))

    def lower(self) -> Fraction:
        return self._iv[0][0] if self._iv else Fraction(0)

    def upper(self) -> Fraction:
        return self._iv[-1][1] if self._iv else Fraction(0)

    def union(self, other: "IntervalSet") -> "IntervalSet":
        return IntervalSet._raw(_normalize(self._iv + other._iv))

    def intersect(self, other: "IntervalSet") -> "IntervalSet":
        out = []
        i = j = 0
        A, B = self._iv, other._iv
        while i < len(A) and j < len(B):
            a = max(A[i][0], B[j][0])
            b = min(A[i][1], B[j][1])
            if a < b:
                out.append((a, b))
            if A[i][1] < B[j][1]:
                i += 1
            else:
                j += 1
        return IntervalSet._raw(tuple(out))

    def subtract(self, other: "IntervalSet") -> "IntervalSet":
        out = []
        B = other._iv
        j = 0
        for a, b in self._iv:
            cur = a
            while j < len(B) and B[j][1] <= cur:
                j += 1
            k = j
            while k < len(B) and B[k][0] < b:
                if B[k][0] > cur:
                    out.append((cur, B[k][0]))
                cur = max(cur, B[k][1])
                if cur >= b:
                    break
                k += 1
            if cur < b:
                out.append((cur, b))
        return IntervalSet._raw(tuple(out))

    __or__ = union
    __and__ = intersect
    __sub__ = subtract

    def issubset(self, other: "IntervalSet") -> bool:
        return not self.subtract(other)

    def isdisjoint(self, other: "IntervalSet") -> bool:
        return not self.intersect(other)

    def to_text(self) -> str:
        return serialize(self)


EMPTY = IntervalSet()


def measure(S: IntervalSet) -> Fraction:
    return S.measure()


def union(S: IntervalSet, T: IntervalSet) -> IntervalSet:
    return S.union(T)


def intersect(S: IntervalSet, T: IntervalSet) -> IntervalSet:
    return S.intersect(T)


def subtract(S: IntervalSet, T: IntervalSet) -> IntervalSet:
    return S.subtract(T)


def union_all(sets: Iterable[IntervalSet]) -> IntervalSet:
    pairs: List[Tuple[Fraction, Fraction]] = []
    for s in sets:
        pairs.extend(s.intervals)
    return IntervalSet._raw(_normalize(pairs))


def carve(S: IntervalSet, m: RationalLike, context: str = "") -> IntervalSet:
    """Leftmost part of S with measure exactly m."""
    m = as_fraction(m)
    if m < 0:
        raise ValueError(f"negative carve request {m}")
    total = S.measure()
    if m > total:
        raise CarveError(m, total, context)
    out = []
    left = m
    for a, b in S.intervals:
        if left == 0:
            break
        if b - a <= left:
            out.append((a, b))
            left -= b - a
        else:
            out.append((a, a + left))
            left = Fraction(0)
    return IntervalSet._raw(tuple(out))


def carve_right(S: IntervalSet, m: RationalLike) -> IntervalSet:
    """Rightmost part of S with measure exactly m (used for trimming)."""
    m = as_fraction(m)
    total = S.measure()
    if m > total:
        raise CarveError(m, total)
    return S.subtract(carve(S, total - m))


def equipartition(S: IntervalSet, n: int) -> List[IntervalSet]:
    if n < 1:
        raise ValueError("equipartition needs n >= 1")
    share = S.measure() / n
    parts = []
    rest = S
    for _ in range(n - 1):
        piece = carve(rest, share)
        parts.append(piece)
        rest = rest.subtract(piece)
    parts.append(rest)
    return parts


def split_by_weights(S: IntervalSet, weights: Sequence[Fraction]) -> List[IntervalSet]:
    """Successive leftmost carves with the given measures; the last part takes the remainder."""
    parts = []
    rest = S
    for w in weights[:-1]:
        piece = carve(rest, w)
        parts.append(piece)
        rest = rest.subtract(piece)
    if weights:
        if rest.measure() != weights[-1]:
            raise CarveError(weights[-1], rest.measure())
        parts.append(rest)
    return parts


class CellGrid:
    """Common refinement of a family of sets; sets become int bitmasks over cells.

    Conversion is exact as long as every endpoint is one of the grid's
    breakpoints.
    """

    def __init__(self, sets: Iterable[IntervalSet]):
        points = set()
        for s in sets:
            for a, b in s.intervals:
                points.add(a)
                points.add(b)
        self.points: List[Fraction] = sorted(points)
        self.index = {x: i for i, x in enumerate(self.points)}
        den = 1
        for x in self.points:
            den = den * x.denominator // gcd(den, x.denominator)
        self.denominator = den
        self.scaled = [x.numerator * (den // x.denominator) for x in self.points]

    def mask(self, S: IntervalSet) -> int:
        m = 0
        idx = self.index
        for a, b in S.intervals:
            m |= (1 << idx[b]) - (1 << idx[a])
        return m

    def runs(self, m: int) -> List[Tuple[int, int]]:
        out = []
        while m:
            lo = (m & -m).bit_length() - 1
            filled = m + (1 << lo)
            hi = (filled & -filled).bit_length() - 1
            out.append((lo, hi))
            m &= ~((1 << hi) - 1)
        return out

    def to_set(self, m: int) -> IntervalSet:
        pts = self.points
        return IntervalSet._raw(tuple((pts[a], pts[b]) for a, b in self.runs(m)))

    def measure(self, m: int) -> Fraction:
        pts = self.scaled
        return Fraction(sum(pts[b] - pts[a] for a, b in self.runs(m)), self.denominator)


def _fmt(x: Fraction) -> str:
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


def serialize(S: IntervalSet) -> str:
    return ",".join(f"{_fmt(a)}:{_fmt(b)}" for a, b in S.intervals)


def deserialize(text: str) -> IntervalSet:
    text = text.strip()
    if not text:
        return EMPTY
    pairs = []
    for chunk in text.split(","):
        a, b = chunk.split(":")
        pairs.append((as_fraction(a), as_fraction(b)))
    return IntervalSet(pairs)

"""Real algebraic numbers as (polynomial, isolating interval) pairs.

Polynomials are coefficient lists of Fractions, lowest degree first.  All
comparisons are exact: intervals are refined by bisection on the sign of the
defining polynomial, and equality goes through a polynomial gcd.
"""

from __future__ import annotations

from fractions import Fraction
from math import isqrt
from typing import List, Optional, Sequence, Tuple, Union

Poly = List[Fraction]
Number = Union[int, Fraction, "AlgebraicNumber"]


def poly(coeffs: Sequence) -> Poly:
    out = [Fraction(c) for c in coeffs]
    while len(out) > 1 and out[-1] == 0:
        out.pop()
    return out


def degree(f: Poly) -> int:
    return len(f) - 1 if any(f) else -1


def evaluate(f: Poly, x: Fraction) -> Fraction:
    acc = Fraction(0)
    for c in reversed(f):
        acc = acc * x + c
    return acc


def sign(x: Fraction) -> int:
    return (x > 0) - (x < 0)


def poly_sub(f: Poly, g: Poly) -> Poly:
    n = max(len(f), len(g))
    return poly([(f[i] if i < len(f) else 0) - (g[i] if i < len(g) else 0) for i in range(n)])


def poly_mul(f: Poly, g: Poly) -> Poly:
    out = [Fraction(0)] * (len(f) + len(g) - 1)
    for i, a in enumerate(f):
        for j, b in enumerate(g):
            out[i + j] += a * b
    return poly(out)


def poly_divmod(f: Poly, g: Poly) -> Tuple[Poly, Poly]:
    if degree(g) < 0:
        raise ZeroDivisionError("polynomial division by zero")
    r = list(f)
    dg = degree(g)
    qt = [Fraction(0)] * max(1, len(f) - dg)
    while degree(r) >= dg and degree(r) >= 0:
        shift = degree(r) - dg
        c = r[degree(r)] / g[dg]
        qt[shift] = c
        for i in range(dg + 1):
            r[i + shift] -= c * g[i]
        r = poly(r)
    return poly(qt), poly(r)


def derivative(f: Poly) -> Poly:
    return poly([i * f[i] for i in range(1, len(f))] or [0])


def monic(f: Poly) -> Poly:
    lead = f[degree(f)]
    return [c / lead for c in f]


def poly_gcd(f: Poly, g: Poly) -> Poly:
    a, b = poly(f), poly(g)
    while degree(b) >= 0:
        a, b = b, poly_divmod(a, b)[1]
    return monic(a) if degree(a) >= 0 else a


def squarefree(f: Poly) -> Poly:
    g = poly_gcd(f, derivative(f))
    if degree(g) <= 0:
        return monic(f)
    return monic(poly_divmod(f, g)[0])


def sturm_sequence(f: Poly) -> List[Poly]:
    seq = [poly(f), derivative(f)]
    while degree(seq[-1]) > 0:
        r = poly_divmod(seq[-2], seq[-1])[1]
        if degree(r) < 0:
            break
        seq.append([-c for c in r])
    return seq


def _variations(seq: List[Poly], x: Fraction) -> int:
    signs = [sign(evaluate(s, x)) for s in seq]
    signs = [s for s in signs if s != 0]
    return sum(1 for a, b in zip(signs, signs[1:]) if a != b)


def count_roots(f: Poly, lo: Fraction, hi: Fraction) -> int:
    """Number of distinct real roots of f in the closed interval [lo, hi]."""
    f = squarefree(f)
    if lo > hi:
        return 0
    seq = sturm_sequence(f)
    n = _variations(seq, lo) - _variations(seq, hi)
    if evaluate(f, lo) == 0:
        n += 1
    return n


class AlgebraicNumber:
    """The unique root of `poly` inside the closed interval [lo, hi]."""

    def __init__(self, coeffs: Sequence, lo, hi, check: bool = True):
        f = squarefree(poly(coeffs))
        self.poly: Poly = f
        self.lo = Fraction(lo)
        self.hi = Fraction(hi)
        if check and count_roots(f, self.lo, self.hi) != 1:
            raise ValueError(f"interval [{lo}, {hi}] does not isolate exactly one root of {coeffs}")
        if degree(f) == 2:
            r = _rational_quadratic_root(f, self.lo, self.hi)
            if r is not None:
                f = [-r, Fraction(1)]
                self.poly = f
        if degree(f) == 1:
            r = -f[0] / f[1]
            self.lo = self.hi = r

    @classmethod
    def rational(cls, x) -> "AlgebraicNumber":
        x = Fraction(x)
        return cls([-x, 1], x, x, check=False)

    @classmethod
    def positive_root(cls, coeffs: Sequence) -> "AlgebraicNumber":
        """Smallest positive root; one must exist."""
        f = squarefree(poly(coeffs))
        if degree(f) < 1:
            raise ValueError("constant polynomial has no roots")

        def cnt(a: Fraction, b: Fraction) -> int:
            # roots in the half-open interval (a, b]
            return count_roots(f, a, b) - (1 if evaluate(f, a) == 0 else 0)

        a = Fraction(0)
        b = 1 + max(abs(c / f[-1]) for c in f[:-1])
        if cnt(a, b) < 1:
            raise ValueError("no positive root")
        while cnt(a, b) > 1:
            mid = (a + b) / 2
            if cnt(a, mid) >= 1:
                b = mid
            else:
                a = mid
        if evaluate(f, b) == 0:
            return cls([-b, 1], b, b, check=False)
        if evaluate(f, a) == 0:
            # move the left end off the root at a
            t = (b - a) / 2
            while cnt(a, a + t) > 0:
                t /= 2
            a = a + t
        return cls(f, a, b)

    @property
    def is_rational(self) -> bool:
        return degree(self.poly) == 1

    def refine(self, width) -> "AlgebraicNumber":
        width = Fraction(width)
        while self.hi - self.lo > width:
            self._bisect()
        return self

    def _bisect(self) -> None:
        mid = (self.lo + self.hi) / 2
        s = sign(evaluate(self.poly, mid))
        if s == 0:
            self.lo = self.hi = mid
            return
        if count_roots(self.poly, self.lo, mid) == 1:
            self.hi = mid
        else:
            self.lo = mid

    def sign_at(self, x: Fraction) -> int:
        """Sign of (self - x), exact."""
        x = Fraction(x)
        while True:
            if x < self.lo:
                return 1
            if x > self.hi:
                return -1
            if evaluate(self.poly, x) == 0:
                return 0
            if self.lo == self.hi:
                return sign(self.lo - x)
            self._bisect()

    def compare(self, other: Number) -> int:
        if not isinstance(other, AlgebraicNumber):
            return self.sign_at(Fraction(other))
        if other.is_rational:
            return self.sign_at(other.lo)
        if self.is_rational:
            return -other.sign_at(self.lo)
        g = poly_gcd(self.poly, other.poly)
        lo, hi = max(self.lo, other.lo), min(self.hi, other.hi)
        if degree(g) > 0 and lo <= hi and count_roots(g, lo, hi) >= 1:
            return 0
        while True:
            if self.hi < other.lo:
                return -1
            if other.hi < self.lo:
                return 1
            self._bisect()
            other._bisect()

    def __eq__(self, other) -> bool:
        if not isinstance(other, (AlgebraicNumber, int, Fraction)):
            return NotImplemented
        return self.compare(other) == 0

    def __hash__(self):
        if self.is_rational:
            return hash(self.lo)
        return hash(tuple(self.poly))

    def __lt__(self, other) -> bool:
        return self.compare(other) < 0

    def __le__(self, other) -> bool:
        return self.compare(other) <= 0

    def __gt__(self, other) -> bool:
        return self.compare(other) > 0

    def __ge__(self, other) -> bool:
        return self.compare(other) >= 0

    def as_fraction(self) -> Fraction:
        if not self.is_rational:
            raise ValueError("not a rational number")
        return self.lo

    def rational_above(self, width=Fraction(1, 10**9)) -> Fraction:
        """A rational >= self, within `width` of it."""
        if self.is_rational:
            return self.lo
        self.refine(width)
        return self.hi

    def rational_below(self, width=Fraction(1, 10**9)) -> Fraction:
        if self.is_rational:
            return self.lo
        self.refine(width)
        return self.lo

    def __float__(self) -> float:
        if self.is_rational:
            return float(self.lo)
        self.refine(Fraction(1, 10**18))
        return float((self.lo + self.hi) / 2)

    def decimal(self, places: int = 5) -> str:
        """Correctly rounded (half-up) decimal string."""
        scale = 10**places
        # refine until round-half-up of lo and hi agree
        while True:
            a = _round_half_up(self.lo * scale)
            b = _round_half_up(self.hi * scale)
            if a == b or self.lo == self.hi:
                break
            self._bisect()
        neg = a < 0
        a = abs(a)
        s = f"{a // scale}.{a % scale:0{places}d}" if places else str(a)
        return "-" + s if neg else s

    def polynomial_text(self, var: str = "x") -> str:
        f = self.poly
        lead = f[-1]
        den = 1
        for c in f:
            den = den * (c / lead).denominator // _gcd(den, (c / lead).denominator)
        ints = [int(c / lead * den) for c in f]
        terms = []
        for i in range(len(ints) - 1, -1, -1):
            c = ints[i]
            if c == 0:
                continue
            mon = "" if i == 0 else (var if i == 1 else f"{var}^{i}")
            if mon and abs(c) == 1:
                coef = "-" if c < 0 else "+"
                terms.append(f"{coef}{mon}")
            else:
                terms.append(f"{'+' if c > 0 else '-'}{abs(c)}{mon}")
        s = "".join(terms).lstrip("+")
        return s or "0"

    def __repr__(self) -> str:
        if self.is_rational:
            return f"AlgebraicNumber({self.lo})"
        return f"AlgebraicNumber(root of {self.polynomial_text()} in [{self.lo}, {self.hi}])"

    def describe(self) -> str:
        if self.is_rational:
            return str(self.lo)
        self.refine(Fraction(1, 10**7))
        return f"root of {self.polynomial_text()} in [{float(self.lo):.7f},{float(self.hi):.7f}]"


def _rational_sqrt(x: Fraction) -> Optional[Fraction]:
    if x < 0:
        return None
    n, d = isqrt(x.numerator), isqrt(x.denominator)
    if n * n == x.numerator and d * d == x.denominator:
        return Fraction(n, d)
    return None


def _rational_quadratic_root(f: Poly, lo: Fraction, hi: Fraction) -> Optional[Fraction]:
    c, b, a = f
    s = _rational_sqrt(b * b - 4 * a * c)
    if s is None:
        return None
    for r in ((-b + s) / (2 * a), (-b - s) / (2 * a)):
        if lo <= r <= hi:
            return r
    return None


def _gcd(a: int, b: int) -> int:
    while b:
        a, b = b, a % b
    return a


def _round_half_up(x: Fraction) -> int:
    return int((x + Fraction(1, 2)).__floor__()) if x >= 0 else -int((-x + Fraction(1, 2)).__floor__())


def quadratic_positive_root(a, b, c) -> AlgebraicNumber:
    """Positive root of a*x^2 + b*x + c with a > 0 > c (exactly one such root)."""
    a, b, c = Fraction(a), Fraction(b), Fraction(c)
    if a == 0:
        return AlgebraicNumber.rational(-c / b)
    if not (a > 0 and c < 0):
        raise ValueError("expected a > 0 > c")
    return AlgebraicNumber.positive_root([c, b, a])


def as_algebraic(x: Number) -> AlgebraicNumber:
    if isinstance(x, AlgebraicNumber):
        return x
    return AlgebraicNumber.rational(x)


def bracket_contains(lo: Fraction, hi: Fraction, x: Number) -> bool:
    """lo <= x <= hi, decided by exact sign evaluation."""
    x = as_algebraic(x)
    return x.compare(lo) >= 0 and x.compare(hi) <= 0

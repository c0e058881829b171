"""Rotation symbols, rational approximation, and continued fractions.

A rotation symbol is either an irrational number, a reduced fraction p/q,
or one of the one-sided symbols p/q+ / p/q- that sit immediately above and
below the fraction in the symbol order.  The projection ``pi`` forgets the
side.  Everything here is exact integer arithmetic except for the stored
float value of an irrational symbol.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

GOLDEN_MEAN = (math.sqrt(5.0) - 1.0) / 2.0
SQRT2_MINUS_1 = math.sqrt(2.0) - 1.0

# A double counts as rational only if some fraction with denominator up to
# this bound reproduces it to near machine precision.
_RATIONAL_DENOMINATOR_CAP = 10**6
_RATIONAL_MATCH_TOL = 1e-13

_SIDE_ORDER = {"minus": -1, "rational": 0, "irrational": 0, "plus": 1}


@dataclass(frozen=True)
class RotationSymbol:
    """One element of the symbol space: irrational, p/q, p/q+ or p/q-."""

    kind: str           # "irrational" | "rational" | "plus" | "minus"
    p: int = 0
    q: int = 1
    omega: float = 0.0  # only meaningful for kind == "irrational"

    def __post_init__(self):
        if self.kind not in _SIDE_ORDER:
            raise ValueError(f"unknown symbol kind {self.kind!r}")
        if self.kind != "irrational":
            if self.q < 1:
                raise ValueError("denominator must be positive")
            if math.gcd(self.p, self.q) != 1:
                raise ValueError(f"{self.p}/{self.q} is not in lowest terms")

    @staticmethod
    def irrational(omega: float) -> "RotationSymbol":
        if not is_irrational(omega):
            raise ValueError(f"{omega!r} is representable as a small fraction; "
                             "use a rational symbol instead")
        return RotationSymbol("irrational", omega=float(omega))

    @staticmethod
    def rational(p: int, q: int) -> "RotationSymbol":
        p, q = _reduce(p, q)
        return RotationSymbol("rational", p=p, q=q)

    @staticmethod
    def plus(p: int, q: int) -> "RotationSymbol":
        p, q = _reduce(p, q)
        return RotationSymbol("plus", p=p, q=q)

    @staticmethod
    def minus(p: int, q: int) -> "RotationSymbol":
        p, q = _reduce(p, q)
        return RotationSymbol("minus", p=p, q=q)

    def pi(self) -> float:
        """Projection to the underlying real number (forgets the side)."""
        if self.kind == "irrational":
            return self.omega
        return self.p / self.q

    @property
    def side(self) -> int:
        """-1 for p/q-, +1 for p/q+, 0 for plain rationals and irrationals."""
        return _SIDE_ORDER[self.kind]

    @property
    def is_plain_rational(self) -> bool:
        return self.kind == "rational"

    def sort_key(self) -> tuple:
        return (self.pi(), self.side)

    def __str__(self) -> str:
        if self.kind == "irrational":
            return format(self.omega, ".17g")
        suffix = {"rational": "", "plus": "+", "minus": "-"}[self.kind]
        return f"{self.p}/{self.q}{suffix}"


def _reduce(p: int, q: int) -> tuple[int, int]:
    if q == 0:
        raise ValueError("denominator must be nonzero")
    if q < 0:
        p, q = -p, -q
    g = math.gcd(p, q)
    return p // g if g else p, q // g if g else q


def is_irrational(omega: float) -> bool:
    """True when no fraction with denominator <= 1e6 matches omega closely.

    Rotation numbers only ever enter computations through |q*omega - p|,
    which is well conditioned in doubles at the denominators used here.
    """
    frac = Fraction(omega).limit_denominator(_RATIONAL_DENOMINATOR_CAP)
    return abs(float(frac) - omega) > _RATIONAL_MATCH_TOL


def parse_symbol(text: str) -> RotationSymbol:
    """Parse "golden", "sqrt2-1", "p/q", "p/q+", "p/q-", or a decimal."""
    s = text.strip()
    if s == "golden":
        return RotationSymbol.irrational(GOLDEN_MEAN)
    if s == "sqrt2-1":
        return RotationSymbol.irrational(SQRT2_MINUS_1)
    if "/" in s:
        side = 0
        if s.endswith("+"):
            side, s = 1, s[:-1]
        elif s.endswith("-"):
            side, s = -1, s[:-1]
        num, _, den = s.partition("/")
        p, q = int(num), int(den)
        if side > 0:
            return RotationSymbol.plus(p, q)
        if side < 0:
            return RotationSymbol.minus(p, q)
        return RotationSymbol.rational(p, q)
    omega = float(s)
    if is_irrational(omega):
        return RotationSymbol.irrational(omega)
    frac = Fraction(omega).limit_denominator(_RATIONAL_DENOMINATOR_CAP)
    return RotationSymbol.rational(frac.numerator, frac.denominator)


def symbol_compare(a: RotationSymbol, b: RotationSymbol) -> int:
    """Total order on symbols: by projection, then minus < plain < plus."""
    ka, kb = a.sort_key(), b.sort_key()
    if ka < kb:
        return -1
    if ka > kb:
        return 1
    return 0


def dirichlet_approx(omega: float, n: int) -> tuple[int, int]:
    """Best rational approximation with denominator at most n.

    Returns the reduced (p, q) with 0 < q <= n minimizing |q*omega - p|
    (ties go to the smallest q).  The returned pair always satisfies
    |q*omega - p| <= 1/(n+1), the classical pigeonhole guarantee.
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    best_err = math.inf
    best = (0, 1)
    for q in range(1, n + 1):
        p = round(q * omega)
        err = abs(q * omega - p)
        if err < best_err:
            best_err = err
            best = (p, q)
    p, q = best
    g = math.gcd(p, q)
    if g > 1:
        # Cannot happen for a strict minimizer, kept as a safety net.
        p, q = p // g, q // g
    return p, q


def convergents(omega: float, depth: int) -> list[tuple[int, int]]:
    """Continued-fraction convergents p_i/q_i with strictly increasing q_i.

    Stops early when the expansion terminates (omega is a dyadic-exact
    rational) or a partial quotient blows past the significance of a double.
    """
    if depth < 1:
        raise ValueError("depth must be >= 1")
    result: list[tuple[int, int]] = []
    h_prev, h = 1, int(math.floor(omega))
    k_prev, k = 0, 1
    result.append((h, k))
    x = omega - math.floor(omega)
    for _ in range(depth - 1):
        if x <= 1e-15 or k > 10**15:
            break
        x = 1.0 / x
        a = int(math.floor(x))
        x -= a
        h, h_prev = a * h + h_prev, h
        k, k_prev = a * k + k_prev, k
        result.append((h, k))
    return result

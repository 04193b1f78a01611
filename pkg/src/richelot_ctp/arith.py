"""Exact global arithmetic: square classes of Q, primes, and the groups Q(S,2).

Everything here is pure-Fraction arithmetic; no floats anywhere.  A square
class is represented canonically as a signed squarefree integer, stored as a
sign together with its sorted prime support, so that subgroup computations
reduce to F2 linear algebra over the basis (-1, p1, p2, ...).
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass
from fractions import Fraction

__all__ = [
    "SquareClass",
    "PlaceSet",
    "squarefree_reduce",
    "enumerate_Q_S2",
    "bad_places",
    "factorize",
    "prime_support",
]


# ---------------------------------------------------------------------------
# integer factorization (trial division + Miller-Rabin + Pollard-Brent rho)
# ---------------------------------------------------------------------------

_SMALL_PRIMES = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47]

# deterministic Miller-Rabin witnesses for n < 3.3 * 10^24
_MR_BASES = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41]


def _is_prime(n: int) -> bool:
    if n < 2:
        return False
    for p in _SMALL_PRIMES:
        if n % p == 0:
            return n == p
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in _MR_BASES:
        if a % n == 0:
            continue
        x = pow(a, d, n)
        if x == 1 or x == n - 1:
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def _pollard_brent(n: int, rng: random.Random) -> int:
    """One nontrivial factor of composite odd n."""
    while True:
        y = rng.randrange(1, n)
        c = rng.randrange(1, n)
        m = 128
        g = r = q = 1
        x = ys = y
        while g == 1:
            x = y
            for _ in range(r):
                y = (y * y + c) % n
            k = 0
            while k < r and g == 1:
                ys = y
                for _ in range(min(m, r - k)):
                    y = (y * y + c) % n
                    q = q * abs(x - y) % n
                g = math.gcd(q, n)
                k += m
            r *= 2
        if g == n:
            g = 1
            while g == 1:
                ys = (ys * ys + c) % n
                g = math.gcd(abs(x - ys), n)
        if g != n:
            return g


def factorize(n: int) -> dict[int, int]:
    """Factor a positive integer; inputs are desk-scale by contract."""
    if n <= 0:
        raise ValueError("factorize expects a positive integer")
    out: dict[int, int] = {}
    for p in _SMALL_PRIMES:
        while n % p == 0:
            out[p] = out.get(p, 0) + 1
            n //= p
    # trial division up to 10^6 catches everything the rho stage would churn on
    d = 49
    while d * d <= n and d < 10 ** 6:
        while n % d == 0:
            out[d] = out.get(d, 0) + 1
            n //= d
        d += 2
    if n == 1:
        return out
    rng = random.Random(0xC0FFEE ^ n)
    stack = [n]
    while stack:
        m = stack.pop()
        if m == 1:
            continue
        if _is_prime(m):
            out[m] = out.get(m, 0) + 1
            continue
        g = _pollard_brent(m, rng)
        stack.append(g)
        stack.append(m // g)
    return out


def prime_support(q: Fraction | int) -> set[int]:
    """Primes dividing the numerator or denominator of q (q != 0)."""
    q = Fraction(q)
    if q == 0:
        raise ValueError("zero has no prime support")
    supp = set(factorize(abs(q.numerator)))
    supp.update(factorize(q.denominator))
    return supp


# ---------------------------------------------------------------------------
# square classes of Q
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class SquareClass:
    """An element of Q*/(Q*)^2 as a signed squarefree integer.

    `sign` is +1 or -1 and `primes` is the strictly increasing squarefree
    support.  Multiplication is symmetric difference of supports; every
    element squares to the trivial class.
    """

    sign: int
    primes: tuple[int, ...]

    def __post_init__(self):
        if self.sign not in (1, -1):
            raise ValueError("sign must be +1 or -1")
        if any(self.primes[i] >= self.primes[i + 1] for i in range(len(self.primes) - 1)):
            raise ValueError("prime support must be strictly increasing")

    @staticmethod
    def one() -> "SquareClass":
        return SquareClass(1, ())

    @staticmethod
    def minus_one() -> "SquareClass":
        return SquareClass(-1, ())

    @property
    def value(self) -> int:
        v = self.sign
        for p in self.primes:
            v *= p
        return v

    def is_one(self) -> bool:
        return self.sign == 1 and not self.primes

    def __mul__(self, other: "SquareClass") -> "SquareClass":
        a, b = set(self.primes), set(other.primes)
        return SquareClass(self.sign * other.sign, tuple(sorted(a ^ b)))

    def __str__(self) -> str:
        return str(self.value)


def squarefree_reduce(q) -> SquareClass:
    """The class of a nonzero rational in Q*/(Q*)^2.

    The result times q is a rational square: n/d ~ n*d mod squares, then
    odd-exponent primes survive.
    """
    q = Fraction(q)
    if q == 0:
        raise ValueError("0 has no square class")
    n = q.numerator * q.denominator
    sign = 1 if n > 0 else -1
    facs = factorize(abs(n))
    primes = tuple(sorted(p for p, e in facs.items() if e % 2))
    return SquareClass(sign, primes)


# ---------------------------------------------------------------------------
# place sets and Q(S,2)
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class PlaceSet:
    """A finite set of rational places; curve-derived sets always hold 2 and oo."""

    finite_primes: tuple[int, ...]
    includes_infinity: bool = True

    def __post_init__(self):
        ps = self.finite_primes
        if any(ps[i] >= ps[i + 1] for i in range(len(ps) - 1)):
            raise ValueError("finite primes must be strictly increasing")

    def __contains__(self, p) -> bool:
        return p in self.finite_primes

    def __str__(self) -> str:
        parts = [str(p) for p in self.finite_primes]
        if self.includes_infinity:
            parts.append("oo")
        return "{" + ", ".join(parts) + "}"


def enumerate_Q_S2(S: PlaceSet) -> list[SquareClass]:
    """The subgroup Q(S,2) of Q*/(Q*)^2 generated by -1 and the primes of S.

    Deterministic order: binary counter over the basis (-1, p1, p2, ...),
    so the list has size 2^(1 + #finite primes) and starts with 1, -1, p1, ...
    """
    basis = [SquareClass.minus_one()] + [SquareClass(1, (p,)) for p in S.finite_primes]
    out = []
    for mask in range(1 << len(basis)):
        c = SquareClass.one()
        for i, b in enumerate(basis):
            if mask >> i & 1:
                c = c * b
        out.append(c)
    return out


def bad_places(curve) -> PlaceSet:
    """Places where the local pairing can be nontrivial: S = {bad reduction} u {2} u {oo}.

    Uses the support of the discriminant data (leading coefficient, Delta, and
    all pairwise root differences), which may overshoot the minimal bad set;
    enlarging S only adds trivial local terms.
    """
    supp = {2}
    supp |= prime_support(curve.delta)
    supp |= prime_support(curve.leading_coefficient)
    roots = curve.roots
    for i in range(len(roots)):
        if roots[i].denominator != 1:
            supp |= prime_support(Fraction(roots[i].denominator))
        for j in range(i + 1, len(roots)):
            supp |= prime_support(roots[i] - roots[j])
    return PlaceSet(tuple(sorted(supp)), includes_infinity=True)

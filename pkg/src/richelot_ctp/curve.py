"""Genus-2 curves in split form y^2 = G1(x) G2(x) G3(x) and their Richelot data.

Construction validates the standing rationality assumption (all Weierstrass
points rational, pairwise distinct) and computes the isogenous codomain
Delta y^2 = L1 L2 L3 with L_i = G_j' G_k - G_j G_k' for [i,j,k] cyclic and
Delta = det(g_ji).  The Delta factor is kept separate from the L_i so the
root special cases downstream can use it literally.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence

__all__ = [
    "CurveError",
    "NonSplitError",
    "SingularModelError",
    "ProductOfEllipticError",
    "UnsupportedModelError",
    "RichelotPair",
    "TwoTorsionPoint",
    "build_pair",
    "weil_e2",
    "weil_ephi",
    "two_torsion_points",
    "poly_eval",
    "poly_mul",
    "poly_str",
]

Poly = tuple[Fraction, ...]  # dense, index = degree, trailing zeros trimmed


class CurveError(ValueError):
    pass


class NonSplitError(CurveError):
    """A quadratic factor has no rational roots."""


class SingularModelError(CurveError):
    """Repeated Weierstrass x-coordinates."""


class ProductOfEllipticError(CurveError):
    """Delta = 0: the Jacobian splits as a product of elliptic curves."""


class UnsupportedModelError(CurveError):
    """Six-root models carry isogeny data only; descent needs a 5-root model."""


# ---------------------------------------------------------------------------
# small dense polynomial kit over Q
# ---------------------------------------------------------------------------


def _trim(c: Sequence[Fraction]) -> Poly:
    c = list(c)
    while c and c[-1] == 0:
        c.pop()
    return tuple(c)


def poly(coeffs) -> Poly:
    return _trim([Fraction(x) for x in coeffs])


def poly_eval(f: Poly, x: Fraction) -> Fraction:
    acc = Fraction(0)
    for c in reversed(f):
        acc = acc * x + c
    return acc


def poly_mul(f: Poly, g: Poly) -> Poly:
    if not f or not g:
        return ()
    out = [Fraction(0)] * (len(f) + len(g) - 1)
    for i, a in enumerate(f):
        for j, b in enumerate(g):
            out[i + j] += a * b
    return _trim(out)


def poly_scale(f: Poly, c: Fraction) -> Poly:
    return _trim([a * c for a in f])


def poly_derivative(f: Poly) -> Poly:
    return _trim([i * c for i, c in enumerate(f)][1:])


def poly_sub(f: Poly, g: Poly) -> Poly:
    n = max(len(f), len(g))
    return _trim([(f[i] if i < len(f) else 0) - (g[i] if i < len(g) else 0) for i in range(n)])


def poly_divmod(f: Poly, g: Poly) -> tuple[Poly, Poly]:
    if not g:
        raise ZeroDivisionError("polynomial division by zero")
    rem = list(f)
    quo = [Fraction(0)] * max(len(f) - len(g) + 1, 0)
    while len(rem) >= len(g) and any(rem):
        while rem and rem[-1] == 0:
            rem.pop()
        if len(rem) < len(g):
            break
        k = len(rem) - len(g)
        c = rem[-1] / g[-1]
        quo[k] = c
        for i, gc in enumerate(g):
            rem[k + i] -= c * gc
        rem.pop()
    return _trim(quo), _trim(rem)


def poly_gcd(f: Poly, g: Poly) -> Poly:
    while g:
        f, g = g, poly_divmod(f, g)[1]
    if f:
        f = poly_scale(f, 1 / f[-1])
    return f


def squarefree_part(f: Poly) -> Poly:
    return poly_divmod(f, poly_gcd(f, poly_derivative(f)))[0]


def _sturm_chain(f: Poly) -> list[Poly]:
    chain = [f, poly_derivative(f)]
    while chain[-1]:
        r = poly_divmod(chain[-2], chain[-1])[1]
        if not r:
            break
        chain.append(poly_scale(r, -1))
    return chain


def _sign_variations(chain, x: Fraction) -> int:
    signs = []
    for p in chain:
        val = poly_eval(p, x)
        if val:
            signs.append(1 if val > 0 else -1)
    return sum(1 for a, b in zip(signs, signs[1:]) if a != b)


def real_region_samples(f: Poly) -> list[Fraction]:
    """One rational sample point inside every maximal interval where f has
    constant nonzero sign (Sturm isolation; handles irrational roots)."""
    f = squarefree_part(f)
    if len(f) <= 1:
        return [Fraction(0)] if f and f[0] != 0 else []
    bound = 1 + max(abs(c) for c in f[:-1]) / abs(f[-1])
    chain = _sturm_chain(f)

    def roots_in(a, b):  # number of real roots in (a, b]
        return _sign_variations(chain, a) - _sign_variations(chain, b)

    # Cauchy bound: all real roots lie strictly inside (-bound, bound), so
    # interval endpoints are never roots as long as split points are nudged
    # off roots below
    intervals = [(-bound, bound)]
    isolated = []
    while intervals:
        a, b = intervals.pop()
        n = roots_in(a, b)
        if n == 0:
            continue
        if n == 1:
            isolated.append((a, b))
            continue
        m = (a + b) / 2
        k = 3
        while poly_eval(f, m) == 0:
            m = (a + (k - 1) * b) / k
            k += 1
        intervals.append((a, m))
        intervals.append((m, b))
    isolated.sort()
    samples = [isolated[0][0] - 1 if isolated else Fraction(0)]
    for (a1, b1), (a2, b2) in zip(isolated, isolated[1:]):
        gap = (b1 + a2) / 2 if b1 < a2 else b1
        samples.append(gap)
    if isolated:
        samples.append(isolated[-1][1] + 1)
    return [s for s in samples if poly_eval(f, s) != 0]


def poly_str(f: Poly, var: str = "x") -> str:
    if not f:
        return "0"
    parts = []
    for i in range(len(f) - 1, -1, -1):
        c = f[i]
        if c == 0:
            continue
        if i == 0:
            term = str(c)
        else:
            mag = "" if abs(c) == 1 else f"{abs(c)}*"
            term = f"{'-' if c < 0 else ''}{mag}{var}" + (f"^{i}" if i > 1 else "")
        if parts and not term.startswith("-"):
            parts.append("+ " + term)
        elif parts:
            parts.append("- " + term[1:])
        else:
            parts.append(term)
    return " ".join(parts)


def _rational_sqrt(q: Fraction) -> Optional[Fraction]:
    if q < 0:
        return None
    ns = math.isqrt(q.numerator)
    ds = math.isqrt(q.denominator)
    if ns * ns == q.numerator and ds * ds == q.denominator:
        return Fraction(ns, ds)
    return None


def rational_roots_quadratic(g: Poly) -> Optional[tuple[Fraction, Fraction]]:
    """Both roots of a rational quadratic, ascending, or None if irrational."""
    c0, c1, c2 = (g + (Fraction(0),) * 3)[:3]
    s = _rational_sqrt(c1 * c1 - 4 * c0 * c2)
    if s is None:
        return None
    r1 = (-c1 - s) / (2 * c2)
    r2 = (-c1 + s) / (2 * c2)
    return (r1, r2) if r1 <= r2 else (r2, r1)


# ---------------------------------------------------------------------------
# two-torsion combinatorics
# ---------------------------------------------------------------------------

INF = "inf"  # marker for the Weierstrass point at infinity of a 5-root model


@dataclass(frozen=True)
class TwoTorsionPoint:
    """Identity, or an unordered pair of Weierstrass markers (root index or INF)."""

    support: frozenset

    @staticmethod
    def identity() -> "TwoTorsionPoint":
        return TwoTorsionPoint(frozenset())

    @staticmethod
    def pair(a, b) -> "TwoTorsionPoint":
        if a == b:
            raise ValueError("support markers must be distinct")
        return TwoTorsionPoint(frozenset((a, b)))

    @property
    def is_identity(self) -> bool:
        return not self.support

    def __str__(self) -> str:
        if self.is_identity:
            return "O"
        def key(m):
            return (1, 0) if m == INF else (0, m)
        a, b = sorted(self.support, key=key)
        return f"{{{a},{b}}}"


def weil_e2(P: TwoTorsionPoint, Q: TwoTorsionPoint) -> int:
    """(-1)^(size of support intersection); identity pairs trivially."""
    return -1 if len(P.support & Q.support) % 2 else 1


def weil_ephi(i: int, j: int) -> int:
    """e_phi on kernel generators: +1 iff i = j."""
    if i not in (1, 2, 3) or j not in (1, 2, 3):
        raise ValueError("kernel indices run 1..3")
    return 1 if i == j else -1


# ---------------------------------------------------------------------------
# the Richelot pair
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class RichelotPair:
    """A validated split genus-2 model together with its isogenous codomain.

    G holds the three factors with lambda absorbed into G1 and the quadratic
    factors normalized monic (a constant rescaling; it changes the L_i only
    by nonzero scalars and leaves Delta, the sextic, and every square class
    untouched).  roots_by_factor groups the Weierstrass x-coordinates per
    factor, each quadratic's pair sorted ascending; `roots` flattens them in
    the slot order the descent maps use.
    """

    G: tuple[Poly, Poly, Poly]
    roots_by_factor: tuple[tuple[Fraction, ...], ...]
    delta: Fraction
    L: tuple[Poly, Poly, Poly]

    @property
    def degree(self) -> int:
        return 5 if len(self.G[0]) == 2 else 6

    @property
    def roots(self) -> tuple[Fraction, ...]:
        return tuple(r for grp in self.roots_by_factor for r in grp)

    @property
    def f(self) -> Poly:
        return poly_mul(poly_mul(self.G[0], self.G[1]), self.G[2])

    @property
    def leading_coefficient(self) -> Fraction:
        return self.f[-1]

    @property
    def fhat(self) -> Poly:
        """The codomain model as y^2 = fhat(x) = L1 L2 L3 / Delta."""
        return poly_scale(poly_mul(poly_mul(self.L[0], self.L[1]), self.L[2]),
                          1 / self.delta)

    def require_five_roots(self):
        if self.degree != 5:
            raise UnsupportedModelError(
                "descent machinery needs the 5-root layout (linear G1)")

    # -- codomain root data ---------------------------------------------

    @property
    def codomain_roots_by_factor(self) -> tuple[Optional[tuple[Fraction, ...]], ...]:
        """Rational roots of each L_i, or None where irrational."""
        out = []
        for Li in self.L:
            if len(Li) == 2:
                out.append((-Li[0] / Li[1],))
            else:
                out.append(rational_roots_quadratic(Li))
        return tuple(out)

    @property
    def codomain_degree(self) -> int:
        """5 when one L_i is linear (its root pairs with infinity), else 6."""
        return 5 if any(len(Li) == 2 for Li in self.L) else 6

    @property
    def codomain_linear_index(self) -> Optional[int]:
        """Index (0-based) of the linear L_i, or None for a 6-root codomain."""
        for i, Li in enumerate(self.L):
            if len(Li) == 2:
                return i
        return None

    def kernel_point(self, i: int) -> TwoTorsionPoint:
        """P_i, the order-2 divisor cut out by G_i = 0 (1-based index)."""
        offs = [0]
        for grp in self.roots_by_factor:
            offs.append(offs[-1] + len(grp))
        grp = self.roots_by_factor[i - 1]
        if len(grp) == 1:
            return TwoTorsionPoint.pair(offs[i - 1], INF)
        return TwoTorsionPoint.pair(offs[i - 1], offs[i - 1] + 1)

    def label(self) -> str:
        return "y^2 = (%s)(%s)(%s)" % tuple(poly_str(g) for g in self.G)


def build_pair(lam, G1, G2, G3) -> RichelotPair:
    """Validate a split model and compute its Richelot codomain data.

    Inputs are coefficient sequences [c0, c1, c2]; G1 may be linear or
    quadratic, G2 and G3 must be quadratic; lam scales G1.  Rejects repeated
    roots (SingularModelError), irrational roots (NonSplitError) and
    Delta = 0 (ProductOfEllipticError).
    """
    lam = Fraction(lam)
    if lam == 0:
        raise CurveError("lambda must be nonzero")
    gs = [poly(G1), poly(G2), poly(G3)]
    if not 2 <= len(gs[0]) <= 3:
        raise CurveError("G1 must have degree 1 or 2")
    if len(gs[1]) != 3 or len(gs[2]) != 3:
        raise CurveError("G2 and G3 must have degree 2")
    gs[0] = poly_scale(gs[0], lam)
    # normalize the quadratics monic, folding their lcs into G1
    for j in (1, 2):
        lc = gs[j][-1]
        if lc != 1:
            gs[0] = poly_scale(gs[0], lc)
            gs[j] = poly_scale(gs[j], 1 / lc)

    roots_by_factor = []
    for g in gs:
        if len(g) == 2:
            roots_by_factor.append((-g[0] / g[1],))
        else:
            rr = rational_roots_quadratic(g)
            if rr is None:
                raise NonSplitError(f"factor {poly_str(g)} has no rational roots")
            if rr[0] == rr[1]:
                raise SingularModelError(f"factor {poly_str(g)} has a repeated root")
            roots_by_factor.append(rr)
    flat = [r for grp in roots_by_factor for r in grp]
    if len(set(flat)) != len(flat):
        raise SingularModelError("Weierstrass x-coordinates are not pairwise distinct")

    rows = [(g + (Fraction(0),) * 3)[:3] for g in gs]
    delta = (rows[0][0] * (rows[1][1] * rows[2][2] - rows[1][2] * rows[2][1])
             - rows[0][1] * (rows[1][0] * rows[2][2] - rows[1][2] * rows[2][0])
             + rows[0][2] * (rows[1][0] * rows[2][1] - rows[1][1] * rows[2][0]))
    if delta == 0:
        raise ProductOfEllipticError("Delta = 0: Jacobian is a product of elliptic curves")

    L = []
    for (j, k) in ((1, 2), (2, 0), (0, 1)):
        gj, gk = gs[j], gs[k]
        L.append(poly_sub(poly_mul(poly_derivative(gj), gk),
                          poly_mul(gj, poly_derivative(gk))))
    pair = RichelotPair(tuple(gs), tuple(roots_by_factor), delta, tuple(L))
    if pair.degree == 5:
        # the codomain is a 5-root model iff G2 and G3 share their linear
        # coefficient (then L1 drops to degree 1); otherwise it has 6 roots
        degs = sorted(len(Li) - 1 for Li in L)
        if degs not in ([1, 2, 2], [2, 2, 2]):
            raise CurveError("degenerate codomain: L degrees are not {1,2,2} or {2,2,2}")
    return pair


def codomain_delta_analogue(curve: RichelotPair) -> Fraction:
    """det of the codomain coefficient matrix (L1; L2; L3).

    With the cyclic orientation L_i = G_j' G_k - G_j G_k' this equals
    -2 Delta^2, so it never vanishes and the codomain needs no extra
    nondegeneracy condition.
    """
    rows = [(L + (Fraction(0),) * 3)[:3] for L in curve.L]
    return (rows[0][0] * (rows[1][1] * rows[2][2] - rows[1][2] * rows[2][1])
            - rows[0][1] * (rows[1][0] * rows[2][2] - rows[1][2] * rows[2][0])
            + rows[0][2] * (rows[1][0] * rows[2][1] - rows[1][1] * rows[2][0]))


def two_torsion_points(curve: RichelotPair) -> list[TwoTorsionPoint]:
    """All 16 elements of J[2] in a fixed order: identity, root pairs
    lexicographic in slot indices, then root-infinity pairs (5-root models)."""
    n = len(curve.roots)
    out = [TwoTorsionPoint.identity()]
    for i in range(n):
        for j in range(i + 1, n):
            out.append(TwoTorsionPoint.pair(i, j))
    if curve.degree == 5:
        for i in range(n):
            out.append(TwoTorsionPoint.pair(i, INF))
    return out

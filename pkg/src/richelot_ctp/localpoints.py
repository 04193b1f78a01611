"""Points of J(Q_v) in Mumford form, the descent maps, and local-image subgroups.

The three descent maps send a degree-2 divisor {(x1,y1),(x2,y2)} to square
classes of evaluations:

    quintuple map (domain):  slot i = (x1 - w_i)(x2 - w_i)
    kernel map (domain):     slot i = G_i(x1) G_i(x2)
    kernel map (codomain):   slot i = L_i(x1) L_i(x2)

with the evaluation at a Weierstrass point replaced by the product of the
other factors (times Delta on the codomain), infinity on the domain counting
as the leading coefficient (quintuple) or 1 (triple).  On the codomain the
infinity contribution is pinned by requiring the kernel divisor cut out by
the linear factor, which is the image under the isogeny of rational
two-torsion, to map to the trivial class; the raw rules the formulas suggest
would violate both that and the norm condition.

Local points are found by tiered search (two-torsion, single points against
residue grids, pairs, then quadratic Mumford polynomials) and local images
are certified complete through local duality: the two kernels' images must
annihilate each other under the cup product and their dimensions must fill
dim H^1 (2 over R, 4 at odd p, 6 at p = 2).
"""

from __future__ import annotations

import itertools
import json
import random
from dataclasses import dataclass, replace
from fractions import Fraction
from pathlib import Path
from typing import Iterator, Optional

from . import gf2
from .arith import squarefree_reduce
from .cohomology import (
    KummerQuintuple,
    KummerTriple,
    LocalKummerQuintuple,
    LocalKummerTriple,
    cup_invariant,
)
from .curve import (
    INF,
    RichelotPair,
    TwoTorsionPoint,
    poly_derivative,
    poly_eval,
    real_region_samples,
    two_torsion_points,
)
from .localfield import (
    InsufficientPrecision,
    LocalPlace,
    PadicApprox,
    is_local_square,
    local_square_class,
    local_square_dim,
    valuation,
)

__all__ = [
    "MumfordDivisor",
    "SearchConfig",
    "SearchExhausted",
    "LocalImage",
    "LocalDataCache",
    "mu_two",
    "mu_phihat",
    "mu_phi",
    "find_local_point",
    "local_image",
    "local_images",
]

DOMAIN = "domain"
CODOMAIN = "codomain"


class SearchExhausted(RuntimeError):
    """No witness divisor found within the escalated search bounds."""


@dataclass(frozen=True)
class SearchConfig:
    """Bounds for the Mumford-divisor search, surfaced as CLI flags."""

    residue_exponent: int = 4
    val_bound: int = 6
    escalations: int = 2
    shuffle_seed: Optional[int] = None
    point_pool: int = 24

    def escalate(self) -> "SearchConfig":
        return replace(self, residue_exponent=self.residue_exponent + 1,
                       val_bound=self.val_bound + 2)


# ---------------------------------------------------------------------------
# Mumford divisors
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class MumfordDivisor:
    """A point of J(Q_v) presented as an effective degree-2 divisor.

    tag is one of identity / weierstrass_pair / point_plus_infinity /
    rational_pair / quadratic.  Rational x-coordinates are exact; their
    y-data is certified by f(x) being a square in Q_v (stored implicitly:
    construction happens only through the search, which checks it).  A
    quadratic divisor stores the monic A = x^2 + a x + b whose roots are the
    conjugate x-coordinates, with f mod A a square in Q_v[x]/(A).
    """

    tag: str
    side: str = DOMAIN
    torsion: Optional[TwoTorsionPoint] = None
    xs: tuple[Fraction, ...] = ()
    quad: Optional[tuple[Fraction, Fraction]] = None  # (a, b) of x^2 + a x + b

    @staticmethod
    def identity(side=DOMAIN) -> "MumfordDivisor":
        return MumfordDivisor("identity", side)

    @staticmethod
    def from_torsion(T: TwoTorsionPoint, side=DOMAIN) -> "MumfordDivisor":
        if T.is_identity:
            return MumfordDivisor.identity(side)
        return MumfordDivisor("weierstrass_pair", side, torsion=T)

    @staticmethod
    def point_plus_infinity(x, side=DOMAIN) -> "MumfordDivisor":
        return MumfordDivisor("point_plus_infinity", side, xs=(Fraction(x),))

    @staticmethod
    def rational_pair(x1, x2, side=DOMAIN) -> "MumfordDivisor":
        return MumfordDivisor("rational_pair", side, xs=(Fraction(x1), Fraction(x2)))

    @staticmethod
    def quadratic(a, b, side=DOMAIN) -> "MumfordDivisor":
        return MumfordDivisor("quadratic", side, quad=(Fraction(a), Fraction(b)))

    def __str__(self) -> str:
        if self.tag == "identity":
            return "id"
        if self.tag == "weierstrass_pair":
            return str(self.torsion)
        if self.tag == "point_plus_infinity":
            return f"{{({self.xs[0]}, y), inf}}"
        if self.tag == "rational_pair":
            return f"{{({self.xs[0]}, y1), ({self.xs[1]}, y2)}}"
        a, b = self.quad
        return f"{{x^2 + ({a})x + ({b}) = 0}}"

    def to_json(self) -> dict:
        d = {"tag": self.tag, "side": self.side}
        if self.torsion is not None:
            d["support"] = sorted((str(m) for m in self.torsion.support))
        if self.xs:
            d["xs"] = [str(x) for x in self.xs]
        if self.quad:
            d["quad"] = [str(c) for c in self.quad]
        return d

    @staticmethod
    def from_json(d: dict) -> "MumfordDivisor":
        torsion = None
        if "support" in d:
            markers = frozenset(INF if m == INF else int(m) for m in d["support"])
            torsion = TwoTorsionPoint(markers)
        return MumfordDivisor(
            d["tag"], d.get("side", DOMAIN), torsion=torsion,
            xs=tuple(Fraction(x) for x in d.get("xs", ())),
            quad=tuple(Fraction(c) for c in d["quad"]) if "quad" in d else None)


# ---------------------------------------------------------------------------
# evaluation helpers
# ---------------------------------------------------------------------------


def _res2(A: tuple[Fraction, Fraction], L) -> Fraction:
    """prod over roots x_j of monic x^2 + a x + b of L(x_j), via symmetric functions."""
    a, b = A
    e1, e2 = -a, b
    c = list(L) + [Fraction(0)] * (3 - len(L))
    c0, c1, c2 = c[0], c[1], c[2]
    return (c2 * c2 * e2 * e2 + c2 * c1 * e1 * e2 + c2 * c0 * (e1 * e1 - 2 * e2)
            + c1 * c1 * e2 + c1 * c0 * e1 + c0 * c0)


def _point_markers(D: MumfordDivisor, curve: RichelotPair) -> list:
    """Finite/infinite point specs of a non-quadratic divisor.

    Each spec is ("x", x) for a finite point or ("inf",); Weierstrass points
    are detected from the curve data at evaluation time.
    """
    if D.tag == "identity":
        return []
    if D.tag == "weierstrass_pair":
        roots = curve.roots if D.side == DOMAIN else _codomain_root_slots(curve)
        out = []
        for m in sorted(D.torsion.support, key=lambda m: (1, 0) if m == INF else (0, m)):
            out.append(("inf",) if m == INF else ("x", roots[m]))
        return out
    if D.tag == "point_plus_infinity":
        return [("x", D.xs[0]), ("inf",)]
    return [("x", x) for x in D.xs]


def _codomain_root_slots(curve: RichelotPair) -> dict:
    """Flat root index -> x value for the codomain, matching the domain layout
    (one linear root first only in the sense of per-factor grouping)."""
    slots = {}
    idx = 0
    for grp in curve.codomain_roots_by_factor:
        if grp is None:
            idx += 2
            continue
        for r in grp:
            slots[idx] = r
            idx += 1
    return slots


def _factor_index_of_root(curve: RichelotPair, x: Fraction, side: str) -> Optional[int]:
    polys = curve.G if side == DOMAIN else curve.L
    for i, g in enumerate(polys):
        if poly_eval(g, x) == 0:
            return i
    return None


def _codomain_inf_values(curve: RichelotPair) -> tuple[Fraction, Fraction, Fraction]:
    """Slotwise contribution of a point at infinity of the codomain.

    5-root codomain (one linear L): infinity is a Weierstrass point, and the
    values are pinned by kernel triviality: the divisor {(z,0), inf} cut out
    by the linear factor is the image of rational two-torsion under the
    isogeny, so it must map to the trivial class; that forces
    c_lin = Delta * prod of the other factors at z and c_j = L_j(z)
    otherwise (and makes the norm condition hold for every divisor
    containing infinity).

    6-root codomain: the two infinite points are ordinary; each contributes
    the leading coefficient of L_i per slot.  They are Q_v-rational exactly
    when the model's leading coefficient is a local square, which is also
    what makes the norm condition close (prod of lc(L_i) = Delta * lc of the
    sextic); callers must gate on that.
    """
    lin = curve.codomain_linear_index
    if lin is None:
        return tuple(Li[-1] for Li in curve.L)
    z = curve.codomain_roots_by_factor[lin][0]
    vals = []
    for i, Li in enumerate(curve.L):
        if i == lin:
            prod = curve.delta
            for l, Ll in enumerate(curve.L):
                if l != lin:
                    prod *= poly_eval(Ll, z)
            vals.append(prod)
        else:
            vals.append(poly_eval(Li, z))
    return tuple(vals)


def _codomain_infinity_rational(curve: RichelotPair, v: LocalPlace) -> bool:
    """Are the codomain's infinite points defined over Q_v?

    Always true for a 5-root codomain (Weierstrass point); for a 6-root
    codomain iff the sextic's leading coefficient is a square in Q_v.
    """
    if curve.codomain_degree == 5:
        return True
    lc = curve.fhat[-1]
    if v.p is None:
        return lc > 0
    return is_local_square(lc, v)


def _triple_slot_values(D: MumfordDivisor, curve: RichelotPair) -> tuple[Fraction, ...]:
    """Exact rational slot values of the kernel descent map on D's side."""
    side = D.side
    polys = curve.G if side == DOMAIN else curve.L
    if D.tag == "identity":
        return (Fraction(1),) * 3
    if D.tag == "quadratic":
        A = D.quad
        vals = []
        for i, g in enumerate(polys):
            r = _res2(A, g)
            if r != 0:
                vals.append(r)
                continue
            # A is this factor up to scaling: the kernel divisor; both points
            # take the Weierstrass special value
            prod = Fraction(1)
            for l, gl in enumerate(polys):
                if l != i:
                    prod *= _res2(A, gl)
            if side == CODOMAIN:
                prod *= curve.delta ** 2
            vals.append(prod)
        return tuple(vals)

    inf_vals = None
    if side == CODOMAIN and any(m[0] == "inf" for m in _point_markers(D, curve)):
        inf_vals = _codomain_inf_values(curve)
    vals = [Fraction(1)] * 3
    for marker in _point_markers(D, curve):
        if marker[0] == "inf":
            if side == DOMAIN:
                continue  # G_i at infinity counts as 1
            for i in range(3):
                vals[i] *= inf_vals[i]
            continue
        x = marker[1]
        j = _factor_index_of_root(curve, x, side)
        for i, g in enumerate(polys):
            if i == j:
                prod = Fraction(1)
                for l, gl in enumerate(polys):
                    if l != i:
                        prod *= poly_eval(gl, x)
                if side == CODOMAIN:
                    prod *= curve.delta
                vals[i] *= prod
            else:
                vals[i] *= poly_eval(g, x)
    return tuple(vals)


def _quintuple_slot_values(D: MumfordDivisor, curve: RichelotPair) -> tuple[Fraction, ...]:
    """Exact rational slot values of the 5-slot map (domain divisors only)."""
    curve.require_five_roots()
    if D.side != DOMAIN:
        raise ValueError("the quintuple map lives on the domain curve")
    roots = curve.roots
    lam = curve.leading_coefficient
    if D.tag == "identity":
        return (Fraction(1),) * 5
    if D.tag == "quadratic":
        return tuple(_res2(D.quad, (-w, Fraction(1))) for w in roots)
    vals = [Fraction(1)] * 5
    for marker in _point_markers(D, curve):
        if marker[0] == "inf":
            for i in range(5):
                vals[i] *= lam
            continue
        x = marker[1]
        for i, w in enumerate(roots):
            if x == w:
                prod = lam
                for l, wl in enumerate(roots):
                    if l != i:
                        prod *= w - wl
                vals[i] *= prod
            else:
                vals[i] *= x - w
    return tuple(vals)


def mu_two(D: MumfordDivisor, curve: RichelotPair, v: Optional[LocalPlace] = None):
    """Image of D under the full 2-descent quintuple map; global when v is None.

    Global images are canonicalized to signed squarefree witnesses; local
    images keep the raw evaluations (class data needs no factorization).
    """
    vals = _quintuple_slot_values(D, curve)
    if v is None:
        return KummerQuintuple.of(tuple(squarefree_reduce(x).value for x in vals))
    return LocalKummerQuintuple.of(vals, v)


def mu_phihat(D: MumfordDivisor, curve: RichelotPair, v: Optional[LocalPlace] = None):
    """Image of a domain divisor under the dual-kernel descent map (G-evaluations)."""
    if D.side != DOMAIN:
        raise ValueError("mu_phihat consumes domain divisors")
    vals = _triple_slot_values(D, curve)
    if v is None:
        return KummerTriple.of(*(squarefree_reduce(x).value for x in vals))
    return LocalKummerTriple.of(vals, v)


def mu_phi(D: MumfordDivisor, curve: RichelotPair, v: Optional[LocalPlace] = None):
    """Image of a codomain divisor under the kernel descent map (L-evaluations)."""
    if D.side != CODOMAIN:
        raise ValueError("mu_phi consumes codomain divisors")
    vals = _triple_slot_values(D, curve)
    if v is None:
        return KummerTriple.of(*(squarefree_reduce(x).value for x in vals))
    return LocalKummerTriple.of(vals, v)


def divisor_image(D: MumfordDivisor, curve: RichelotPair, v: Optional[LocalPlace] = None):
    return (mu_phihat if D.side == DOMAIN else mu_phi)(D, curve, v)


# ---------------------------------------------------------------------------
# squareness of f modulo a quadratic (the y-data certificate)
# ---------------------------------------------------------------------------


def _poly_mod_quadratic(f, A) -> tuple[Fraction, Fraction]:
    """f mod (x^2 + a x + b) as (u, w) with remainder u x + w."""
    a, b = A
    u, w = Fraction(0), Fraction(0)
    for c in reversed(f):
        # multiply current remainder by x, then add c
        u, w = w - a * u, c - b * u
    return u, w


def _rational_square_root(q: Fraction) -> Optional[Fraction]:
    if q < 0:
        return None
    import math
    ns, ds = math.isqrt(q.numerator), math.isqrt(q.denominator)
    if ns * ns == q.numerator and ds * ds == q.denominator:
        return Fraction(ns, ds)
    return None


def quadratic_mumford_certificate(curve_f, A, v: LocalPlace, prec: int = 24) -> bool:
    """Is f a square in Q_v[x]/(A) for monic irreducible A = x^2 + a x + b?

    Norm-trace criterion: with xi = f mod A, a square root B = b1 x + b0
    exists iff N(xi) is a square n^2 in Q_v and Tr(xi) +- 2n is a square
    (tau = Tr(B) satisfies tau^2 = Tr(xi) + 2 nu with nu = N(B) = +-n).
    Rational data is tested exactly; the irrational-sqrt branch uses bounded
    p-adic digits and raises InsufficientPrecision rather than guessing.
    """
    a, b = A
    u, w = _poly_mod_quadratic(curve_f, A)
    disc = a * a - 4 * b
    if v.p is None:
        # irreducible over R means conjugate complex points; C is quadratically
        # closed, so the certificate always exists (f mod A != 0 here)
        return not (u == 0 and w == 0)
    if u == 0:
        if w == 0:
            return True  # A divides f: the two-torsion divisor, B = 0
        return is_local_square(w, v) or is_local_square(w * disc, v)
    norm = w * w - a * u * w + b * u * u
    if norm == 0:
        return False
    if not is_local_square(norm, v):
        return False
    tr = 2 * w - a * u
    n = _rational_square_root(norm)
    if n is not None:
        for nu in (n, -n):
            t = tr + 2 * nu
            if t == 0:
                continue  # trace-zero roots only square to rational xi
            if is_local_square(t, v):
                return True
        return False
    p = v.p
    n_pad = PadicApprox.from_rational(norm, p, prec).sqrt()
    tr_pad = PadicApprox.from_rational(tr, p, prec)
    two = PadicApprox.from_rational(2, p, prec)
    for nu in (n_pad, -n_pad):
        try:
            t = tr_pad + two * nu
            if t.is_square():
                return True
        except InsufficientPrecision:
            raise
    return False


# ---------------------------------------------------------------------------
# candidate generation
# ---------------------------------------------------------------------------

_RESIDUE_CAP = 128  # enumerate unit residues modulo p^m only while p^m stays small


def _unit_residues(p: int, exponent: int) -> list[int]:
    m = 1
    while m < exponent and p ** (m + 1) <= _RESIDUE_CAP:
        m += 1
    mod = p ** m
    return [r for r in range(1, mod) if r % p]


def _root_centers(f, p: int, depth: int) -> list[Fraction]:
    """Hensel-lifted approximations of the simple roots of f mod p.

    Near-root refinement needs centers p-adically close to every root of f,
    including irrational ones; simple roots mod p lift uniquely to mod
    p^depth by Newton iteration.  Works on the primitive integer model, so
    denominators of f never obstruct the reduction.
    """
    if p > 1000:
        return []
    import math
    den = 1
    for c in f:
        den = den * c.denominator // math.gcd(den, c.denominator)
    fi = [int(c * den) for c in f]
    g = 0
    for c in fi:
        g = math.gcd(g, c)
    fi = [c // g for c in fi]
    fprime = [i * c for i, c in enumerate(fi)][1:]
    centers = []
    for t in range(p):
        val = 0
        for c in reversed(fi):
            val = (val * t + c) % p
        if val:
            continue
        der = 0
        for c in reversed(fprime):
            der = (der * t + c) % p
        if der == 0:
            continue  # multiple root mod p; grid sampling has to cover it
        x, mod = t, p
        for _ in range(depth):
            mod *= p
            fx = dx = 0
            for c in reversed(fi):
                fx = (fx * x + c) % mod
            for c in reversed(fprime):
                dx = (dx * x + c) % mod
            if dx % p == 0:
                break
            x = (x - fx * pow(dx, -1, mod)) % mod
        centers.append(Fraction(x))
    return centers


def _x_candidates(curve: RichelotPair, side: str, v: LocalPlace, cfg: SearchConfig) -> list[Fraction]:
    f = curve.f if side == DOMAIN else curve.fhat
    rational_roots = (curve.roots if side == DOMAIN
                      else tuple(x for grp in curve.codomain_roots_by_factor
                                 if grp for x in grp))
    if v.p is None:
        # one sample inside every region where f has constant sign; the
        # positive ones are kept by the caller
        return [x for x in real_region_samples(f) if poly_eval(f, x) > 0]
    p = v.p
    units = _unit_residues(p, cfg.residue_exponent)
    xs: list[Fraction] = []
    seen = set()

    def push(x: Fraction):
        if x not in seen:
            seen.add(x)
            xs.append(x)

    # near-root refinements first: they carry the interesting classes, and
    # the pairs tier feeds on the earliest points found
    centers = list(rational_roots)
    for c in _root_centers(f, p, cfg.val_bound):
        if not any(valuation(c - r, p) >= cfg.val_bound for r in rational_roots if c != r):
            centers.append(c)
    for root in centers:
        for j in range(1, cfg.val_bound + 1):
            pj = Fraction(p) ** j
            for r in units:
                push(root + r * pj)
    for e in range(-cfg.val_bound, cfg.val_bound + 1):
        pe = Fraction(p) ** e
        for r in units:
            push(r * pe)
    return xs


def _torsion_divisors(curve: RichelotPair, side: str) -> list[MumfordDivisor]:
    """All rational two-torsion divisors on the requested side.

    On the domain the standing assumption gives all 16.  On the codomain an
    irrational quadratic factor contributes only its kernel divisor, as a
    quadratic-tag pair of conjugate Weierstrass points; the infinite point
    enters only for a 5-root codomain, where it is Weierstrass.
    """
    if side == DOMAIN:
        return [MumfordDivisor.from_torsion(T, DOMAIN) for T in two_torsion_points(curve)]
    curve.require_five_roots()
    slots = _codomain_root_slots(curve)
    markers = sorted(slots)
    if curve.codomain_degree == 5:
        markers.append(INF)
    out = [MumfordDivisor.identity(CODOMAIN)]
    for m1, m2 in itertools.combinations(markers, 2):
        out.append(MumfordDivisor.from_torsion(TwoTorsionPoint.pair(m1, m2), CODOMAIN))
    for i, grp in enumerate(curve.codomain_roots_by_factor):
        if grp is None:
            Li = curve.L[i]
            lc = Li[-1]
            out.append(MumfordDivisor.quadratic(Li[1] / lc, Li[0] / lc, CODOMAIN))
    return out


def _quadratic_candidates(curve: RichelotPair, side: str, v: LocalPlace,
                          cfg: SearchConfig) -> Iterator[MumfordDivisor]:
    if v.p is None:
        return  # conjugate pairs have trivial image over R
    p = v.p
    f = curve.f if side == DOMAIN else curve.fhat
    units = _unit_residues(p, min(cfg.residue_exponent, 3 if p == 2 else 1))
    if len(units) > 40:
        units = units[:20] + units[-20:]

    def attempt(a: Fraction, b: Fraction):
        disc = a * a - 4 * b
        if disc == 0 or is_local_square(disc, v):
            return None  # split or degenerate over Q_v: covered by point pairs
        try:
            if quadratic_mumford_certificate(f, (a, b), v):
                return MumfordDivisor.quadratic(a, b, side)
        except InsufficientPrecision:
            pass
        return None

    seen = set()
    coeffs = [Fraction(0)]
    for e in range(-2, 3):
        pe = Fraction(p) ** e
        coeffs.extend(r * pe for r in units)
    for a in coeffs:
        for b in coeffs:
            if b == 0:
                continue
            seen.add((a, b))
            D = attempt(a, b)
            if D:
                yield D

    # perturbations of quadratics vanishing on two-torsion x-pairs: divisors
    # p-adically near a torsion pair live here, and on models whose reduction
    # degenerates they can be the only points there are
    polys = curve.G if side == DOMAIN else curve.L
    roots = (curve.roots if side == DOMAIN
             else tuple(x for grp in curve.codomain_roots_by_factor if grp for x in grp))
    bases = []
    for g in polys:
        if len(g) == 3:
            bases.append((g[1] / g[2], g[0] / g[2]))
    for r, s in itertools.combinations(roots, 2):
        bases.append((-(r + s), r * s))
    small = units[:12] + [Fraction(0)]
    for a0, b0 in bases:
        for j in range(1, min(cfg.val_bound, 4) + 1):
            pj = Fraction(p) ** j
            for r1 in small:
                for r2 in small:
                    if r1 == r2 == 0:
                        continue
                    a, b = a0 + r1 * pj, b0 + r2 * pj
                    if b == 0 or (a, b) in seen:
                        continue
                    seen.add((a, b))
                    D = attempt(a, b)
                    if D:
                        yield D


def _point_tiers(curve: RichelotPair, side: str, v: LocalPlace,
                 cfg: SearchConfig) -> list[Iterator[MumfordDivisor]]:
    """Candidate divisors in tiers: torsion; single points (with the infinite
    point); pairs of found points; quadratic Mumford pairs."""
    rng = random.Random(cfg.shuffle_seed) if cfg.shuffle_seed is not None else None
    f = curve.f if side == DOMAIN else curve.fhat
    polys = curve.G if side == DOMAIN else curve.L
    weier = (curve.roots if side == DOMAIN
             else tuple(x for grp in curve.codomain_roots_by_factor if grp for x in grp))
    good_xs: list[Fraction] = []
    seen_classes: set = set()

    def torsion_tier():
        torsion = _torsion_divisors(curve, side)
        if rng:
            rng.shuffle(torsion)
        yield from torsion

    def singles_tier():
        # a divisor {P, inf} needs the infinite point rational over Q_v; when
        # it is not, the tier still collects points for the pairs tier
        inf_ok = side == DOMAIN or _codomain_infinity_rational(curve, v)
        xs = _x_candidates(curve, side, v, cfg)
        if rng:
            rng.shuffle(xs)
        for x in xs:
            fx = poly_eval(f, x)
            if fx == 0:
                continue
            is_pt = (fx > 0) if v.p is None else is_local_square(fx, v)
            if not is_pt:
                continue
            # a pair {P, Q} maps to the product of the points' slot classes,
            # so the pool wants one representative per distinct class
            ckey = tuple(local_square_class(poly_eval(g, x), v).bits for g in polys)
            if ckey not in seen_classes or len(good_xs) < cfg.point_pool:
                seen_classes.add(ckey)
                if len(good_xs) < 3 * cfg.point_pool:
                    good_xs.append(x)
            if inf_ok:
                yield MumfordDivisor.point_plus_infinity(x, side)

    def pairs_tier():
        pool = list(weier) + good_xs
        pairs = list(itertools.combinations(range(len(pool)), 2))
        if rng:
            rng.shuffle(pairs)
        n_weier = len(weier)
        for i, j in pairs:
            if i < n_weier and j < n_weier:
                continue  # both Weierstrass: already in the torsion tier
            yield MumfordDivisor.rational_pair(pool[i], pool[j], side)

    return [torsion_tier(), singles_tier(), pairs_tier(),
            _quadratic_candidates(curve, side, v, cfg)]


def _candidate_divisors(curve: RichelotPair, side: str, v: LocalPlace,
                        cfg: SearchConfig) -> Iterator[MumfordDivisor]:
    for tier in _point_tiers(curve, side, v, cfg):
        yield from tier


# ---------------------------------------------------------------------------
# local images and the duality certificate
# ---------------------------------------------------------------------------

CERTIFIED = "certified"
HEURISTIC = "heuristic"


@dataclass(frozen=True)
class LocalImage:
    """The image of one kernel's local descent map as an F2 subgroup."""

    place: LocalPlace
    side: str  # "phihat" (domain points) or "phi" (codomain points)
    basis: tuple[LocalKummerTriple, ...]
    witnesses: tuple[MumfordDivisor, ...]
    status: str

    @property
    def dim(self) -> int:
        return len(self.basis)

    def span(self) -> gf2.Span:
        return gf2.Span(t.mask() for t in self.basis)

    def contains(self, t: LocalKummerTriple) -> bool:
        return t.mask() in self.span()


def _h1_dim(v: LocalPlace) -> int:
    return 2 * local_square_dim(v)


def _annihilate(img_a: list, img_b: list) -> bool:
    for ta, _ in img_a:
        for tb, _ in img_b:
            if cup_invariant(ta, tb) != 0:
                return False
    return True


def local_images(curve: RichelotPair, v: LocalPlace, cfg: SearchConfig = SearchConfig(),
                 cache: Optional["LocalDataCache"] = None) -> tuple[LocalImage, LocalImage]:
    """Both local descent images at v, certified against each other.

    Returns (phihat image, phi image).  Certification: the dimensions sum to
    dim H^1 and every cross pair cups to zero.  Failing that within the
    escalation budget, both come back flagged heuristic.
    """
    if cache is not None:
        hit = cache.get_images(curve, v)
        if hit is not None:
            return hit
    curve.require_five_roots()
    target = _h1_dim(v)
    found = {"phihat": [], "phi": []}  # side -> list of (triple, witness)
    spans = {"phihat": gf2.Span(), "phi": gf2.Span()}

    def filled() -> bool:
        return spans["phihat"].dim + spans["phi"].dim >= target

    def drain(side_name: str, tier) -> bool:
        for D in tier:
            t = divisor_image(D, curve, v)
            if spans[side_name].add(t.mask()):
                found[side_name].append((t, D))
                if filled():
                    return True
        return False

    # walk the tiers in lockstep across both sides so the cheap tiers of one
    # side are never starved behind the expensive tiers of the other
    config = cfg
    for _ in range(cfg.escalations + 1):
        tiers = {"phihat": _point_tiers(curve, DOMAIN, v, config),
                 "phi": _point_tiers(curve, CODOMAIN, v, config)}
        for level in range(len(tiers["phihat"])):
            for name in ("phihat", "phi"):
                if drain(name, tiers[name][level]):
                    break
            if filled():
                break
        if filled():
            break
        config = config.escalate()

    certified = (spans["phihat"].dim + spans["phi"].dim == target
                 and _annihilate(found["phihat"], found["phi"]))
    status = CERTIFIED if certified else HEURISTIC
    images = tuple(
        LocalImage(v, name, tuple(t for t, _ in found[name]),
                   tuple(D for _, D in found[name]), status)
        for name in ("phihat", "phi"))
    if cache is not None:
        cache.put_images(curve, v, images)
    return images


def local_image(curve: RichelotPair, side: str, v: LocalPlace,
                cfg: SearchConfig = SearchConfig(),
                cache: Optional["LocalDataCache"] = None) -> LocalImage:
    """The local image subgroup for one side; `side` is "phihat" or "phi"."""
    imgs = local_images(curve, v, cfg, cache)
    return imgs[0] if side == "phihat" else imgs[1]


def find_local_point(target, curve: RichelotPair, v: LocalPlace,
                     cfg: SearchConfig = SearchConfig(),
                     cache: Optional["LocalDataCache"] = None) -> MumfordDivisor:
    """A domain divisor whose dual-kernel image equals `target` at v.

    `target` may be a global KummerTriple or a LocalKummerTriple.  Search
    order: the 16 two-torsion divisors, single points over residue grids,
    pairs of found points, quadratic Mumford polynomials; the bounds escalate
    cfg.escalations times before SearchExhausted.
    """
    t_local = target.restrict(v) if isinstance(target, KummerTriple) else target
    key = tuple(c.bits for c in t_local.classes)
    if cache is not None and cfg.shuffle_seed is None:
        hit = cache.get_witness(curve, v, key)
        if hit is not None:
            return hit
    config = cfg
    for _ in range(cfg.escalations + 1):
        for D in _candidate_divisors(curve, DOMAIN, v, config):
            img = mu_phihat(D, curve, v)
            if img.same_class(t_local):
                if cache is not None and cfg.shuffle_seed is None:
                    cache.put_witness(curve, v, key, D)
                return D
        config = config.escalate()
    raise SearchExhausted(f"no divisor found with image {t_local} at {v}")


# ---------------------------------------------------------------------------
# cache (in memory, optionally persisted)
# ---------------------------------------------------------------------------


class LocalDataCache:
    """Shared store for local images and witness divisors.

    Reads are unsynchronized; inserts are idempotent, so concurrent use is
    safe as long as writes are not interleaved with directory persistence.
    """

    def __init__(self, directory: Optional[str] = None):
        self._images: dict = {}
        self._witnesses: dict = {}
        self.directory = Path(directory) if directory else None
        if self.directory:
            self.directory.mkdir(parents=True, exist_ok=True)
            self._load()

    @staticmethod
    def _curve_key(curve: RichelotPair) -> str:
        return json.dumps([[str(c) for c in g] for g in curve.G])

    def get_images(self, curve, v):
        return self._images.get((self._curve_key(curve), str(v)))

    def put_images(self, curve, v, images):
        self._images[(self._curve_key(curve), str(v))] = images
        self._persist()

    def get_witness(self, curve, v, key):
        return self._witnesses.get((self._curve_key(curve), str(v), key))

    def put_witness(self, curve, v, key, D):
        self._witnesses[(self._curve_key(curve), str(v), key)] = D
        self._persist()

    # persistence keeps witnesses only; images are cheap to rebuild and their
    # triples do not serialize compactly
    def _persist(self):
        if not self.directory:
            return
        data = []
        for (ck, vs, key), D in self._witnesses.items():
            data.append({"curve": ck, "place": vs,
                         "target": [list(b) for b in key], "witness": D.to_json()})
        (self.directory / "witnesses.json").write_text(json.dumps(data, indent=1))

    def _load(self):
        path = self.directory / "witnesses.json"
        if not path.exists():
            return
        for row in json.loads(path.read_text()):
            key = tuple(tuple(b) for b in row["target"])
            self._witnesses[(row["curve"], row["place"], key)] = (
                MumfordDivisor.from_json(row["witness"]))

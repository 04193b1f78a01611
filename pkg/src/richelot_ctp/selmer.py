"""Global descent: the two kernel Selmer groups as subgroups of (Q*/(Q*)^2)^3.

A candidate class lies in the Selmer group iff its restriction at every bad
place lands in the local descent image there; away from the bad set both the
candidates (supported on S) and the images (unramified classes) make the
condition automatic, so only places of S are consulted.  Candidates run over
pairs (a1, a2) in Q(S,2)^2 with a3 = a1 a2 forced by the norm condition.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

from . import gf2
from .arith import PlaceSet, SquareClass, bad_places, enumerate_Q_S2
from .cohomology import KummerTriple
from .curve import RichelotPair
from .localfield import local_square_class, places_of
from .localpoints import (
    CODOMAIN,
    DOMAIN,
    LocalDataCache,
    SearchConfig,
    _torsion_divisors,
    divisor_image,
    local_images,
)

__all__ = ["SelmerGroup", "torsion_images", "selmer_group", "encode_triple", "triple_span"]

PHI = "phi"
PHIHAT = "phihat"


def _encoding_primes(S: PlaceSet) -> tuple[int, ...]:
    return S.finite_primes


def _encode_class(c: SquareClass, primes) -> int:
    m = 1 if c.sign < 0 else 0
    for i, p in enumerate(primes):
        if p in c.primes:
            m |= 1 << (i + 1)
    return m


def encode_triple(t: KummerTriple, primes) -> int:
    """F2 coordinates of a triple over the basis (-1, p1, p2, ...) per slot."""
    width = len(primes) + 1
    m = 0
    for i, c in enumerate(t.classes):
        if any(p not in primes for p in c.primes):
            raise ValueError(f"{t} is not supported on {primes}")
        m |= _encode_class(c, primes) << (i * width)
    return m


def triple_span(triples, primes) -> gf2.Span:
    return gf2.Span(encode_triple(t, primes) for t in triples)


@dataclass(frozen=True)
class SelmerGroup:
    """A kernel Selmer group with a torsion-first basis.

    basis spans the group; known_point_basis is the prefix coming from images
    of rational two-torsion.  status is certified iff every consulted local
    image carried a duality certificate.  Listed members are genuine either
    way (their local conditions were witnessed by actual divisor images);
    a heuristic status means the enumeration may be missing elements, not
    that any listed one is wrong.
    """

    side: str
    basis: tuple[KummerTriple, ...]
    known_point_basis: tuple[KummerTriple, ...]
    elements: tuple[KummerTriple, ...]
    places: PlaceSet
    status: str

    @property
    def dim(self) -> int:
        return len(self.basis)

    def span(self) -> gf2.Span:
        return triple_span(self.basis, _encoding_primes(self.places))

    def contains(self, t: KummerTriple) -> bool:
        return encode_triple(t, _encoding_primes(self.places)) in self.span()

    def same_group(self, generators) -> bool:
        """Subgroup equality against another generator list, basis-free."""
        primes = _encoding_primes(self.places)
        return gf2.same_span((encode_triple(t, primes) for t in generators),
                             (encode_triple(t, primes) for t in self.basis))


def torsion_images(curve: RichelotPair, side: str) -> list[KummerTriple]:
    """Images of the rational two-torsion divisors under the global descent
    map of `side`, deduplicated to an F2 subgroup basis."""
    curve.require_five_roots()
    S = bad_places(curve)
    primes = _encoding_primes(S)
    divisors = _torsion_divisors(curve, DOMAIN if side == PHIHAT else CODOMAIN)
    span = gf2.Span()
    basis = []
    for D in divisors:
        t = divisor_image(D, curve)
        if span.add(encode_triple(t, primes)):
            basis.append(t)
    return basis


def selmer_group(curve: RichelotPair, side: str, cfg: SearchConfig = SearchConfig(),
                 cache: Optional[LocalDataCache] = None) -> SelmerGroup:
    """Compute the kernel Selmer group of `side` ("phihat" or "phi")."""
    if side not in (PHI, PHIHAT):
        raise ValueError("side must be 'phi' or 'phihat'")
    curve.require_five_roots()
    if cache is None:
        cache = LocalDataCache()
    S = bad_places(curve)
    primes = _encoding_primes(S)
    places = places_of(S)

    imgs = {}
    status = "certified"
    for v in places:
        pair = local_images(curve, v, cfg, cache)
        img = pair[0] if side == PHIHAT else pair[1]
        if img.status != "certified":
            status = "heuristic"
        imgs[v] = img.span()

    # restriction masks of each Q(S,2) element at each place
    group = enumerate_Q_S2(S)
    index = {c.value: i for i, c in enumerate(group)}
    local_masks = {}
    for v in places:
        dims = []
        masks = []
        for c in group:
            lc = local_square_class(c.value, v)
            masks.append(lc.mask())
            dims.append(len(lc.bits))
        local_masks[v] = (masks, dims[0])

    # consult the most restrictive places first
    ordered = sorted(places, key=lambda v: imgs[v].dim)

    members = []
    for i1, a1 in enumerate(group):
        for i2, a2 in enumerate(group):
            a3 = a1 * a2
            i3 = index[a3.value]
            ok = True
            for v in ordered:
                masks, d = local_masks[v]
                m = masks[i1] | masks[i2] << d | masks[i3] << (2 * d)
                if m not in imgs[v]:
                    ok = False
                    break
            if ok:
                members.append(KummerTriple((a1, a2, a3)))

    # torsion-first basis
    span = gf2.Span()
    basis = []
    known = []
    for t in torsion_images(curve, side):
        if span.add(encode_triple(t, primes)):
            basis.append(t)
            known.append(t)
    for t in members:
        if span.add(encode_triple(t, primes)):
            basis.append(t)
    assert len(members) == 1 << len(basis), "membership set is not a subgroup"
    return SelmerGroup(side, tuple(basis), tuple(known), tuple(members), S, status)

"""Square-class tuple avatars of the cohomology groups and the maps between them.

The kernel-descent cohomology groups embed into norm-one tuples of square
classes: triples (alpha1, alpha2, alpha3) with alpha1 alpha2 alpha3 a square
for both isogeny kernels, quintuples (x1..x5) with square product for full
2-torsion.  The connecting maps are

    triple  -> quintuple : (a, b, c) -> (1, c, c, b, b)
    quintuple -> triple  : (a1..a5)  -> (a1, a2 a3, a4 a5)
    section              : (a, b, c) -> (a, 1, b, 1, c)

and the descent back onto the first kernel inverts the first map slotwise.
Local tuples keep an exact rational witness per slot so every Hilbert symbol
downstream is evaluated on rationals.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .arith import SquareClass, squarefree_reduce
from .localfield import LocalPlace, LocalSquareClass, hilbert_symbol, local_square_class

__all__ = [
    "KummerTriple",
    "KummerQuintuple",
    "LocalKummerTriple",
    "LocalKummerQuintuple",
    "NormConditionError",
    "NotInImageError",
    "psi_phi_to_two",
    "psi_two_to_phihat",
    "lift_phihat_to_two",
    "triple_quotient",
    "quintuple_quotient",
    "descend_to_phi",
    "cup_invariant",
]


class NormConditionError(ValueError):
    """Component product is not a square."""


class NotInImageError(RuntimeError):
    """A local quintuple is not in the image of the triple embedding.

    This is the pipeline's principal self-check: it fires precisely when a
    local point does not lift the chosen class, or the global lift is wrong.
    """


# ---------------------------------------------------------------------------
# global tuples (canonical squarefree components)
# ---------------------------------------------------------------------------


def _as_classes(components, n) -> tuple[SquareClass, ...]:
    cs = tuple(c if isinstance(c, SquareClass) else squarefree_reduce(c)
               for c in components)
    if len(cs) != n:
        raise ValueError(f"expected {n} components")
    prod = SquareClass.one()
    for c in cs:
        prod = prod * c
    if not prod.is_one():
        raise NormConditionError(f"component product {prod} is not a square")
    return cs


@dataclass(frozen=True)
class KummerTriple:
    """Element of the norm-one part of (Q*/(Q*)^2)^3."""

    classes: tuple[SquareClass, SquareClass, SquareClass]

    @staticmethod
    def of(a, b, c) -> "KummerTriple":
        return KummerTriple(_as_classes((a, b, c), 3))

    @property
    def values(self) -> tuple[int, int, int]:
        return tuple(c.value for c in self.classes)

    def is_trivial(self) -> bool:
        return all(c.is_one() for c in self.classes)

    def __mul__(self, other: "KummerTriple") -> "KummerTriple":
        return KummerTriple(tuple(a * b for a, b in zip(self.classes, other.classes)))

    def restrict(self, v: LocalPlace) -> "LocalKummerTriple":
        return LocalKummerTriple.of(self.values, v)

    def __str__(self) -> str:
        return "(%d, %d, %d)" % self.values


@dataclass(frozen=True)
class KummerQuintuple:
    """Element of the norm-one part of (Q*/(Q*)^2)^5."""

    classes: tuple[SquareClass, ...]

    @staticmethod
    def of(*cs) -> "KummerQuintuple":
        if len(cs) == 1 and isinstance(cs[0], (tuple, list)):
            cs = tuple(cs[0])
        return KummerQuintuple(_as_classes(cs, 5))

    @property
    def values(self) -> tuple[int, ...]:
        return tuple(c.value for c in self.classes)

    def is_trivial(self) -> bool:
        return all(c.is_one() for c in self.classes)

    def __mul__(self, other: "KummerQuintuple") -> "KummerQuintuple":
        return KummerQuintuple(tuple(a * b for a, b in zip(self.classes, other.classes)))

    def restrict(self, v: LocalPlace) -> "LocalKummerQuintuple":
        return LocalKummerQuintuple.of(self.values, v)

    def __str__(self) -> str:
        return "(" + ", ".join(str(v) for v in self.values) + ")"


# ---------------------------------------------------------------------------
# local tuples: class data plus exact rational witnesses
# ---------------------------------------------------------------------------


def _local_parts(witnesses, v: LocalPlace, n: int):
    ws = tuple(Fraction(w) for w in witnesses)
    if len(ws) != n:
        raise ValueError(f"expected {n} witnesses")
    if any(w == 0 for w in ws):
        raise ValueError("witnesses must be nonzero")
    classes = tuple(local_square_class(w, v) for w in ws)
    prod = Fraction(1)
    for w in ws:
        prod *= w
    if not local_square_class(prod, v).is_trivial():
        raise NormConditionError(f"witness product {prod} is not a square in Q_{v}")
    return ws, classes


@dataclass(frozen=True)
class LocalKummerTriple:
    place: LocalPlace
    witnesses: tuple[Fraction, Fraction, Fraction]
    classes: tuple[LocalSquareClass, ...]

    @staticmethod
    def of(witnesses, v: LocalPlace) -> "LocalKummerTriple":
        ws, cls = _local_parts(witnesses, v, 3)
        return LocalKummerTriple(v, ws, cls)

    def is_trivial(self) -> bool:
        return all(c.is_trivial() for c in self.classes)

    def same_class(self, other: "LocalKummerTriple") -> bool:
        return self.place == other.place and self.classes == other.classes

    def mask(self) -> int:
        m, shift = 0, 0
        for c in self.classes:
            m |= c.mask() << shift
            shift += len(c.bits)
        return m

    def __mul__(self, other: "LocalKummerTriple") -> "LocalKummerTriple":
        if other.place != self.place:
            raise ValueError("mismatched places")
        # raw witness products: local class data never needs factorization
        return LocalKummerTriple.of(
            tuple(a * b for a, b in zip(self.witnesses, other.witnesses)), self.place)

    def __str__(self) -> str:
        return "(" + ", ".join(str(c.representative()) for c in self.classes) + ")@" + str(self.place)


@dataclass(frozen=True)
class LocalKummerQuintuple:
    place: LocalPlace
    witnesses: tuple[Fraction, ...]
    classes: tuple[LocalSquareClass, ...]

    @staticmethod
    def of(witnesses, v: LocalPlace) -> "LocalKummerQuintuple":
        ws, cls = _local_parts(witnesses, v, 5)
        return LocalKummerQuintuple(v, ws, cls)

    def is_trivial(self) -> bool:
        return all(c.is_trivial() for c in self.classes)

    def same_class(self, other: "LocalKummerQuintuple") -> bool:
        return self.place == other.place and self.classes == other.classes

    def __mul__(self, other: "LocalKummerQuintuple") -> "LocalKummerQuintuple":
        if other.place != self.place:
            raise ValueError("mismatched places")
        return LocalKummerQuintuple.of(
            tuple(a * b for a, b in zip(self.witnesses, other.witnesses)), self.place)

    def __str__(self) -> str:
        return "(" + ", ".join(str(c.representative()) for c in self.classes) + ")@" + str(self.place)


# ---------------------------------------------------------------------------
# the connecting maps
# ---------------------------------------------------------------------------


def psi_phi_to_two(t):
    """(a, b, c) -> (1, c, c, b, b); works on global and local triples."""
    if isinstance(t, KummerTriple):
        a, b, c = t.classes
        return KummerQuintuple((SquareClass.one(), c, c, b, b))
    a, b, c = t.witnesses
    return LocalKummerQuintuple.of((1, c, c, b, b), t.place)


def psi_two_to_phihat(q):
    """(a1, a2, a3, a4, a5) -> (a1, a2 a3, a4 a5); global or local."""
    if isinstance(q, KummerQuintuple):
        c = q.classes
        return KummerTriple((c[0], c[1] * c[2], c[3] * c[4]))
    w = q.witnesses
    return LocalKummerTriple.of((w[0], w[1] * w[2], w[3] * w[4]), q.place)


def lift_phihat_to_two(t):
    """The section (a, b, c) -> (a, 1, b, 1, c) of psi_two_to_phihat."""
    if isinstance(t, KummerTriple):
        a, b, c = t.classes
        one = SquareClass.one()
        return KummerQuintuple((a, one, b, one, c))
    a, b, c = t.witnesses
    return LocalKummerQuintuple.of((a, 1, b, 1, c), t.place)


def triple_quotient(x, y):
    """Componentwise difference; the groups are 2-torsion, so x / y = x * y."""
    return x * y


def quintuple_quotient(x, y):
    return x * y


def descend_to_phi(c: LocalKummerQuintuple) -> LocalKummerTriple:
    """Invert (a,b,c) -> (1,c,c,b,b) on a local quintuple: returns (c2 c4, c4, c2).

    Enforces the image conditions as local classes (slot 1 trivial, slots 2~3
    and 4~5 equal); violations raise NotInImageError rather than silently
    producing a wrong pairing value.
    """
    cls = c.classes
    if not cls[0].is_trivial():
        raise NotInImageError("slot 1 is a nontrivial local class")
    if cls[1] != cls[2]:
        raise NotInImageError("slots 2 and 3 disagree as local classes")
    if cls[3] != cls[4]:
        raise NotInImageError("slots 4 and 5 disagree as local classes")
    w = c.witnesses
    return LocalKummerTriple.of((w[1] * w[3], w[3], w[1]), c.place)


def cup_invariant(rho: LocalKummerTriple, t, v: LocalPlace = None) -> int:
    """F2 invariant of the cup product: 0 if the Hilbert-symbol product
    (rho1, t1)_v (rho2, t2)_v (rho3, t3)_v is +1, else 1."""
    if v is None:
        v = rho.place
    if rho.place != v:
        raise ValueError("rho lives at a different place")
    tw = t.values if isinstance(t, KummerTriple) else t.witnesses
    s = 1
    for r, a in zip(rho.witnesses, tw):
        s *= hilbert_symbol(r, a, v)
    return 0 if s == 1 else 1

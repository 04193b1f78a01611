"""The pairing on the dual-kernel Selmer group, its Gram matrix, and rank reports.

A local value at v is computed by the lift-and-descend pipeline: lift the
class to a quintuple (a1, 1, a2, 1, a3), find a local point below it, take
the quintuple image of that point, divide out the lift, descend the result
to a kernel triple rho_v, and cup rho_v against the second argument through
Hilbert symbols.  Every intermediate is validated, so a wrong witness or a
wrong lift raises instead of producing a silently wrong sign.  The global
value is the sum over the bad places; all other places contribute zero.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Sequence

from . import gf2
from .arith import bad_places, prime_support
from .cohomology import (
    KummerQuintuple,
    KummerTriple,
    cup_invariant,
    descend_to_phi,
    lift_phihat_to_two,
    psi_two_to_phihat,
    quintuple_quotient,
)
from .curve import RichelotPair
from .localfield import LocalPlace, places_of
from .localpoints import LocalDataCache, SearchConfig, find_local_point, mu_two
from .selmer import SelmerGroup, encode_triple

__all__ = [
    "PairingMatrix",
    "DescentReport",
    "InconsistentDimensions",
    "ctp_local",
    "ctp_global",
    "ctp_matrix",
    "rank_report",
]


class InconsistentDimensions(RuntimeError):
    """The descent bookkeeping violates exactness of the dimension count."""


def ctp_local(a: KummerTriple, a2: KummerTriple, curve: RichelotPair, v: LocalPlace,
              cache: Optional[LocalDataCache] = None, cfg: SearchConfig = SearchConfig(),
              lift: Optional[KummerQuintuple] = None) -> int:
    """Local pairing contribution at v, in F2, for a fixed global lift of `a`.

    Individual local values depend on the choice of lift and local point; only
    their sum over all places is canonical.
    """
    if lift is None:
        lift = lift_phihat_to_two(a)
    P_v = find_local_point(a, curve, v, cfg, cache)
    delta2 = mu_two(P_v, curve, v)
    diff = quintuple_quotient(delta2, lift.restrict(v))
    rho_v = descend_to_phi(diff)
    return cup_invariant(rho_v, a2, v)


def _pairing_places(curve: RichelotPair, a, a2, lift) -> list[LocalPlace]:
    S = bad_places(curve)
    extra = set()
    for t in (a, a2):
        for val in t.values:
            extra |= prime_support(val)
    if lift is not None:
        for val in lift.values:
            extra |= prime_support(val)
    extra -= set(S.finite_primes)
    places = places_of(S)
    places.extend(LocalPlace.finite(p) for p in sorted(extra))
    return places


def ctp_global(a: KummerTriple, a2: KummerTriple, curve: RichelotPair,
               cache: Optional[LocalDataCache] = None, cfg: SearchConfig = SearchConfig(),
               lift: Optional[KummerQuintuple] = None,
               breakdown: Optional[dict] = None) -> int:
    """The pairing of a and a2, in F2 (0 or 1, i.e. 0 or 1/2 in Q/Z).

    Sums local contributions over the bad places; when a custom lift with
    support outside the bad set is supplied, the affected places are included
    so the product formula still closes the sum.
    """
    if lift is not None and not psi_kills(lift, a):
        raise ValueError("lift does not map to a under the quintuple-to-triple map")
    total = 0
    for v in _pairing_places(curve, a, a2, lift):
        val = ctp_local(a, a2, curve, v, cache, cfg, lift)
        if breakdown is not None:
            breakdown[str(v)] = val
        total ^= val
    return total


def psi_kills(lift: KummerQuintuple, a: KummerTriple) -> bool:
    return psi_two_to_phihat(lift).values == a.values


@dataclass(frozen=True)
class PairingMatrix:
    """F2 Gram matrix of the pairing on a chosen basis, with per-place data.

    entries[i][j] is the pairing of basis[i] against basis[j]; breakdown maps
    (i, j) to the per-place contributions for the default lift.  symmetric is
    recorded, not assumed; an asymmetric matrix is reported as a warning.
    """

    basis: tuple[KummerTriple, ...]
    entries: tuple[tuple[int, ...], ...]
    breakdown: dict
    radical_basis: tuple[int, ...]  # masks w.r.t. the basis
    symmetric: bool

    @property
    def radical_dim(self) -> int:
        return len(self.radical_basis)

    def radical_elements(self) -> list[KummerTriple]:
        out = []
        for mask in gf2.Span(self.radical_basis).elements():
            t = KummerTriple.of(1, 1, 1)
            for i, b in enumerate(self.basis):
                if mask >> i & 1:
                    t = t * b
            out.append(t)
        return out

    def in_radical(self, t: KummerTriple, primes) -> bool:
        span = gf2.Span(encode_triple(x, primes) for x in self.radical_elements())
        return encode_triple(t, primes) in span

    def qz_entries(self) -> tuple[tuple[str, ...], ...]:
        """The matrix over Q/Z, entries '0' and '1/2'."""
        return tuple(tuple("1/2" if e else "0" for e in row) for row in self.entries)


def ctp_matrix(selmer: SelmerGroup, curve: RichelotPair,
               cache: Optional[LocalDataCache] = None, cfg: SearchConfig = SearchConfig(),
               basis: Optional[Sequence[KummerTriple]] = None) -> PairingMatrix:
    """Gram matrix of the pairing on `basis` (default: the Selmer basis)."""
    if selmer.side != "phihat":
        raise ValueError("the pairing is computed on the dual-kernel Selmer group")
    if cache is None:
        cache = LocalDataCache()
    bas = tuple(basis) if basis is not None else selmer.basis
    for t in bas:
        if not selmer.contains(t):
            raise ValueError(f"{t} is not in the Selmer group")
    n = len(bas)
    entries = []
    breakdown = {}
    for i in range(n):
        row = []
        for j in range(n):
            bd = {}
            row.append(ctp_global(bas[i], bas[j], curve, cache, cfg, breakdown=bd))
            breakdown[(i, j)] = bd
        entries.append(tuple(row))
    entries = tuple(entries)
    rows = [sum(e << j for j, e in enumerate(row)) for row in entries]
    radical = gf2.echelon(gf2.nullspace(rows, n))
    symmetric = all(entries[i][j] == entries[j][i] for i in range(n) for j in range(n))
    return PairingMatrix(bas, entries, breakdown, tuple(radical), symmetric)


@dataclass(frozen=True)
class DescentReport:
    """Dimension bookkeeping for the descent, before and after the pairing.

    The rank bound replaces the dual-kernel Selmer dimension by the dimension
    of the pairing radical; the inferred 2-Selmer dimension closes the
    six-term dimension count.  Both are derived bookkeeping around the
    computed groups, flagged as such in reports.
    """

    dim_kernel_domain: int      # rational points of the kernel on J
    dim_two_torsion: int        # rational two-torsion of J
    dim_kernel_codomain: int    # rational points of the dual kernel
    dim_selmer_phi: int
    dim_selmer_phihat: int
    dim_radical: int
    rank_bound_before: int
    rank_bound_after: int
    inferred_dim_sel2: int

    @property
    def sequence_dims(self) -> tuple[int, ...]:
        return (self.dim_kernel_domain, self.dim_two_torsion,
                self.dim_kernel_codomain, self.dim_selmer_phi,
                self.inferred_dim_sel2, self.dim_radical)

    def alternating_sum(self) -> int:
        s = 0
        for i, d in enumerate(self.sequence_dims):
            s += d if i % 2 == 0 else -d
        return s


def rank_report(curve: RichelotPair, selmer_phi: SelmerGroup,
                selmer_phihat: SelmerGroup, matrix: PairingMatrix) -> DescentReport:
    """Assemble the rank bounds and the inferred 2-Selmer dimension.

    Under the standing rationality assumption the kernels contribute
    dimensions 2, 4, 2.  Raises InconsistentDimensions when the six-term
    alternating sum fails to vanish.
    """
    d_phi = selmer_phi.dim
    d_phihat = selmer_phihat.dim
    k = matrix.radical_dim
    before = d_phi + d_phihat - 2 - 2
    after = d_phi + k - 2 - 2
    inferred = 4 - 2 - 2 + d_phi + k
    report = DescentReport(
        dim_kernel_domain=2, dim_two_torsion=4, dim_kernel_codomain=2,
        dim_selmer_phi=d_phi, dim_selmer_phihat=d_phihat, dim_radical=k,
        rank_bound_before=before, rank_bound_after=after,
        inferred_dim_sel2=inferred)
    if report.alternating_sum() != 0:
        raise InconsistentDimensions(
            f"alternating dimension sum is {report.alternating_sum()}, not 0")
    return report

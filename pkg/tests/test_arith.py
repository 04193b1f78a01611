import random
from fractions import Fraction

import pytest

from richelot_ctp.arith import (
    PlaceSet,
    enumerate_Q_S2,
    factorize,
    prime_support,
    squarefree_reduce,
)
from richelot_ctp import gf2


def test_squarefree_reduce_examples():
    assert squarefree_reduce(18).value == 2
    assert squarefree_reduce(-50).value == -2
    assert squarefree_reduce(Fraction(4, 9)).value == 1


def test_squarefree_reduce_rejects_zero():
    with pytest.raises(ValueError):
        squarefree_reduce(0)


def test_reduce_times_input_is_square():
    rng = random.Random(7)
    for _ in range(200):
        q = Fraction(rng.randint(-500, 500) or 1, rng.randint(1, 500))
        c = squarefree_reduce(q)
        prod = q * c.value
        assert prod > 0
        assert squarefree_reduce(prod).is_one()


def test_multiplicativity_and_involution():
    rng = random.Random(11)
    for _ in range(200):
        a = Fraction(rng.randint(-300, 300) or 3, rng.randint(1, 60))
        b = Fraction(rng.randint(-300, 300) or 5, rng.randint(1, 60))
        ca, cb = squarefree_reduce(a), squarefree_reduce(b)
        assert squarefree_reduce(a * b) == ca * cb
        assert (ca * ca).is_one()


def test_factorize_roundtrip():
    rng = random.Random(3)
    for _ in range(50):
        n = rng.randint(1, 10 ** 12)
        facs = factorize(n)
        m = 1
        for p, e in facs.items():
            assert e >= 1
            m *= p ** e
        assert m == n


def test_factorize_large_semiprime():
    p, q = 1000003, 1000033
    assert factorize(p * q) == {p: 1, q: 1}


def test_enumerate_Q_S2_sizes_and_closure():
    S = PlaceSet((2,))
    grp = enumerate_Q_S2(S)
    assert sorted(c.value for c in grp) == [-2, -1, 1, 2]

    S = PlaceSet((2, 3, 7, 113))
    grp = enumerate_Q_S2(S)
    assert len(grp) == 32
    vals = {c.value for c in grp}
    assert len(vals) == 32
    for a in grp[:8]:
        for b in grp[:8]:
            assert (a * b).value in vals

    grp0 = enumerate_Q_S2(PlaceSet(()))
    assert sorted(c.value for c in grp0) == [-1, 1]


def test_prime_support_of_fraction():
    assert prime_support(Fraction(12, 35)) == {2, 3, 5, 7}


# -- F2 linear algebra helpers ------------------------------------------------


def test_span_membership_and_dim():
    s = gf2.Span([0b101, 0b011])
    assert s.dim == 2
    assert 0b110 in s
    assert 0b100 not in s
    assert not s.add(0b110)
    assert s.add(0b100)
    assert s.dim == 3


def test_same_span_basis_independent():
    assert gf2.same_span([0b101, 0b011], [0b110, 0b011])
    assert not gf2.same_span([0b101], [0b011])


def test_nullspace_matches_bruteforce():
    rng = random.Random(5)
    for _ in range(50):
        n = rng.randint(1, 7)
        rows = [rng.getrandbits(n) for _ in range(rng.randint(1, 7))]
        kern = gf2.nullspace(rows, n)
        span = gf2.Span(kern)
        brute = [x for x in range(1 << n)
                 if all(bin(r & x).count("1") % 2 == 0 for r in rows)]
        assert len(brute) == 1 << span.dim
        assert all(x in span for x in brute)

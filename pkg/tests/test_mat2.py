import random

import pytest

from mksurf.mat2 import (
    Mat2,
    commutator,
    count_conic_modp,
    fricke_level,
    in_trace_set,
    mat_mod,
    random_sl2z,
    sl2_conjugacy_test_modp,
    sl2_elements_modp,
)
from mksurf.rings import ModInt, legendre


def rand_mat(rng, lo=-9, hi=9):
    return Mat2(*(rng.randint(lo, hi) for _ in range(4)))


def test_commutator_examples():
    assert commutator(Mat2(1, 1, 0, 1), Mat2(1, 0, 1, 1)) == Mat2(3, -1, 1, 0)
    x = Mat2(3, 5, 1, 2)
    assert commutator(x, x.identity_like()) == x.identity_like()
    x5 = mat_mod(Mat2(0, 2, 2, 0), 5)
    y5 = mat_mod(Mat2(0, -1, 1, 0), 5)
    w = commutator(x5, y5)
    assert w == mat_mod(Mat2(-1, 0, 0, -1), 5)


def test_adjugate_identities():
    # A + A' = Tr(A) I ; A A' = det(A) I ; Cayley-Hamilton ; det(A+B)
    rng = random.Random(101)
    for _ in range(10**4):
        a = rand_mat(rng)
        b = rand_mat(rng)
        tr = a.trace()
        det = a.det()
        ident = a.identity_like()
        assert a + a.adjugate() == ident.scale(tr)
        assert a * a.adjugate() == ident.scale(det)
        assert a * a == a.scale(tr) - ident.scale(det)
        adj = a.adjugate()
        assert adj * adj == adj.scale(tr) - ident.scale(det)
        assert (a + b).det() == a.det() + b.det() + (a * b.adjugate()).trace()


def test_commutator_expansion_identity():
    # W(X,Y) = x3 XY + (x1 - x2 x3) X + x2 Y^-1 - I over SL2(Z)
    rng = random.Random(55)
    for _ in range(10**4):
        x = random_sl2z(rng, length=6)
        y = random_sl2z(rng, length=6)
        x1, x2, x3 = x.trace(), y.trace(), (x * y).trace()
        ident = x.identity_like()
        rhs = (x * y).scale(x3) + x.scale(x1 - x2 * x3) + y.inverse().scale(x2) - ident
        assert commutator(x, y) == rhs


def test_fricke_level():
    x, y = Mat2(1, 1, 0, 1), Mat2(1, 0, 1, 1)
    assert fricke_level(x, y) == 5
    assert commutator(x, y).trace() == 3
    ident = x.identity_like()
    assert fricke_level(x, ident) == 4
    assert fricke_level(x, x) == 4
    rng = random.Random(77)
    for _ in range(2000):
        a = random_sl2z(rng, length=6)
        b = random_sl2z(rng, length=6)
        assert fricke_level(a, b) == commutator(a, b).trace() + 2
    with pytest.raises(ValueError):
        fricke_level(Mat2(2, 0, 0, 1), ident)


def test_trace_set():
    ident = Mat2(1, 0, 0, 1)
    rng = random.Random(9)
    for _ in range(100):
        x = random_sl2z(rng, length=5)
        assert in_trace_set(ident, x)
    assert in_trace_set(Mat2(3, -1, 1, 0), Mat2(1, 0, 1, 1))
    assert not in_trace_set(Mat2(2, 1, 1, 1), Mat2(1, 1, 0, 1))


def test_trace_set_characterizes_commutators():
    # Z = W(X,Y) iff Y in S(Z) and X, XY in S(Z^-1), for Tr Z != 2
    rng = random.Random(31)
    checked_pos = checked_neg = 0
    while checked_pos < 300 or checked_neg < 300:
        x = random_sl2z(rng, length=5)
        y = random_sl2z(rng, length=5)
        if rng.random() < 0.5:
            z = commutator(x, y)
        else:
            z = random_sl2z(rng, length=5)
        if z.trace() == 2:
            continue
        zinv = z.inverse()
        rhs = (in_trace_set(z, y) and in_trace_set(zinv, x)
               and in_trace_set(zinv, x * y))
        lhs = commutator(x, y) == z
        assert lhs == rhs
        checked_pos += lhs
        checked_neg += not lhs


def brute_conic_count(delta, n, p):
    return sum((x * x - delta * y * y - n) % p == 0
               for x in range(p) for y in range(p))


def test_count_conic_examples():
    assert count_conic_modp(1, 1, 5) == 4
    assert count_conic_modp(0, 1, 5) == 10
    assert count_conic_modp(2, 0, 5) == 1


def test_count_conic_matches_brute_force():
    for p in (3, 5, 7, 11, 13):
        for delta in range(p):
            for n in range(p):
                assert count_conic_modp(delta, n, p) == brute_conic_count(delta, n, p), \
                    (delta, n, p)


def test_sl2_conjugacy_same_trace_class():
    # one class per trace t != +-2: any two such matrices are conjugate
    p = 5
    a = Mat2(0, 1, -1, 1)   # trace 1
    b = Mat2(1, 1, -1, 0)   # trace 1
    ok, gamma = sl2_conjugacy_test_modp(a, b, p)
    assert ok
    am, bm = mat_mod(a, p), mat_mod(b, p)
    assert gamma * am * gamma.inverse() == bm


def test_sl2_conjugacy_unipotent_split():
    # [[1,1],[0,1]] and [[1,zeta],[0,1]] split when zeta is a nonresidue
    p = 7
    zeta = next(z for z in range(2, p) if legendre(z, p) == -1)
    ok, _ = sl2_conjugacy_test_modp(Mat2(1, 1, 0, 1), Mat2(1, zeta, 0, 1), p)
    assert not ok
    square = next(z for z in range(2, p) if legendre(z, p) == 1)
    ok, gamma = sl2_conjugacy_test_modp(Mat2(1, 1, 0, 1), Mat2(1, square, 0, 1), p)
    assert ok and gamma * mat_mod(Mat2(1, 1, 0, 1), p) * gamma.inverse() \
        == mat_mod(Mat2(1, square, 0, 1), p)


def test_sl2_conjugacy_identity_and_brute_agreement():
    a = Mat2(2, 1, 1, 1)
    ok, gamma = sl2_conjugacy_test_modp(a, a, 11)
    assert ok and gamma == mat_mod(a, 11).identity_like()
    # cross-check the canonical-form path against exhaustive search
    rng = random.Random(4)
    p = 5
    elements = [Mat2(*(ModInt(v, p) for v in t)) for t in sl2_elements_modp(p)]
    for _ in range(40):
        a = mat_mod(random_sl2z(rng, length=5), p)
        b = mat_mod(random_sl2z(rng, length=5), p)
        ok, gamma = sl2_conjugacy_test_modp(a, b, p)
        brute = any(g * a * g.inverse() == b for g in elements)
        assert ok == brute
        if ok:
            assert gamma * a * gamma.inverse() == b

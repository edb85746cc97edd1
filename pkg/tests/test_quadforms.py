import random

import pytest

from mksurf.markoff import MarkoffMove, MarkoffPoint, apply_move, class_data, search_integral
from mksurf.quadforms import (
    TernaryForm,
    form_isotropic,
    hasse_profile,
    legendre_isotropic,
    mat3_det,
    mat3_mul,
    mat3_transpose,
    mtype_conjugate,
    mtype_matrix,
)
ALL_MOVES = ([MarkoffMove.vieta(j) for j in (1, 2, 3)]
             + [MarkoffMove.perm(p) for p in
                [(1, 3, 2), (2, 1, 3), (2, 3, 1), (3, 1, 2), (3, 2, 1)]]
             + [MarkoffMove.sign_change(1, 2), MarkoffMove.sign_change(1, 3),
                MarkoffMove.sign_change(2, 3)])


def random_point(rng, span=25):
    return MarkoffPoint.make(rng.randint(-span, span), rng.randint(-span, span),
                             rng.randint(-span, span))


def test_gram_determinant():
    rng = random.Random(21)
    for _ in range(10**4):
        p = random_point(rng)
        f = TernaryForm.from_point(p)
        assert f.gram_det() == -2 * (p.k - 4)


def test_hasse_profile_329():
    prof1 = hasse_profile(MarkoffPoint.make(-3, 8, 8))
    assert prof1.nontrivial() == {5: -1, 13: -1}
    assert prof1.product() == 1
    prof2 = hasse_profile(MarkoffPoint.make(-4, 4, 11))
    assert prof2.nontrivial() == {}
    assert prof2.product() == 1


def test_hasse_profile_product_formula_on_found_points():
    # every existing point has a trivial total product
    for k in (70, 108, 329):
        for p in search_integral(k, 30):
            prof = hasse_profile(p)
            assert prof.product() == 1, p


def bounded_orbit_walk(start, rng, steps, cap=10**6):
    """Random orbit walk that rejects moves exploding the coordinates
    (Vieta moves grow doubly exponentially)."""
    p = start
    out = [p]
    for _ in range(steps):
        q = apply_move(rng.choice(ALL_MOVES), p)
        if q.maxabs() <= cap:
            p = q
        out.append(p)
    return out


def test_hasse_profile_orbit_invariance():
    rng = random.Random(40)
    for start in (MarkoffPoint.make(-3, 8, 8), MarkoffPoint.make(-3, 3, 6)):
        base = hasse_profile(start).nontrivial()
        for p in bounded_orbit_walk(start, rng, 60):
            assert hasse_profile(p).nontrivial() == base


def test_hasse_profile_rejects_low_level():
    with pytest.raises(ValueError):
        hasse_profile(MarkoffPoint.make(1, 1, 1))  # k = 2 < 4


def test_legendre_isotropic():
    assert legendre_isotropic(1, -1, -1)
    assert legendre_isotropic(1, -5, -59)
    assert not legendre_isotropic(1, -5, -13)
    with pytest.raises(ValueError):
        legendre_isotropic(-1, -1, -1)
    with pytest.raises(ValueError):
        legendre_isotropic(4, -1, -1)


def brute_isotropy(form, bound=40):
    for u1 in range(-bound, bound + 1):
        for u2 in range(-bound, bound + 1):
            for u3 in range(-bound, bound + 1):
                if (u1, u2, u3) != (0, 0, 0) and form.evaluate(u1, u2, u3) == 0:
                    return (u1, u2, u3)
    return None


def test_form_isotropic_examples():
    # k = 3780: isotropic, with (409, 251, 5) among the small zeros
    p = MarkoffPoint.make(-3, 3, 57)
    assert p.k == 3780
    verdict, data = form_isotropic(p)
    assert verdict == "Isotropic"
    f = TernaryForm.from_point(p)
    assert f.evaluate(*data["witness"]) == 0
    assert f.evaluate(409, 251, 5) == 0
    # k = 329 second class: isotropic, (9, 1, -1) is a zero
    p2 = MarkoffPoint.make(-4, 4, 11)
    verdict, data = form_isotropic(p2)
    assert verdict == "Isotropic"
    f2 = TernaryForm.from_point(p2)
    assert f2.evaluate(*data["witness"]) == 0
    assert f2.evaluate(9, 1, -1) == 0
    # anisotropic examples
    for coords in ((-3, 3, 4), (-3, 3, 17), (-3, 9, 10), (-3, 8, 8)):
        verdict, data = form_isotropic(MarkoffPoint.make(*coords))
        assert verdict == "Anisotropic", coords
        assert brute_isotropy(TernaryForm.from_point(MarkoffPoint.make(*coords))) is None


def test_form_isotropic_inapplicable():
    # every coordinate is +-2, so no squarefree-part reduction applies
    verdict, data = form_isotropic(MarkoffPoint.make(-2, 2, 2))
    assert verdict == "Inapplicable"
    assert "reason" in data


def test_form_isotropic_verdicts_match_witness_search():
    rng = random.Random(33)
    done = 0
    while done < 40:
        p = random_point(rng, span=8)
        if not isinstance(p.k, int) or p.k <= 4:
            continue
        verdict, data = form_isotropic(p, witness_bound=200)
        if verdict == "Inapplicable":
            continue
        w = brute_isotropy(TernaryForm.from_point(p), bound=25)
        if verdict == "Anisotropic":
            assert w is None, (p, w)
        done += 1


def test_mtype_matrices():
    p = MarkoffPoint.make(-3, 3, 6)
    v1 = mtype_matrix(MarkoffMove.vieta(1), p)
    assert v1[2] == [0, 6, 1]  # third row carries x3
    d = mtype_matrix(MarkoffMove.sign_change(2, 3), p)
    assert d == [[1, 0, 0], [0, 1, 0], [0, 0, -1]]
    rng = random.Random(44)
    for _ in range(10**3):
        p = random_point(rng)
        for mv in ALL_MOVES:
            g = mtype_matrix(mv, p)
            assert mat3_det(g) in (1, -1)
            assert mtype_conjugate(g, p).coords() == apply_move(mv, p).coords()


def test_k460_nonmtype_equivalence():
    # the two level-460 classes become equivalent through an involution that
    # the move group does not contain, found by solving the shape constraints
    g = [[1, 0, -21], [0, 1, -18], [0, 0, -1]]
    x1 = TernaryForm.from_point(MarkoffPoint.make(-3, 3, 17)).gram()
    x2 = TernaryForm.from_point(MarkoffPoint.make(-3, 9, 10)).gram()
    assert mat3_mul(mat3_transpose(g), mat3_mul(x1, g)) == x2
    assert mat3_mul(g, g) == [[1, 0, 0], [0, 1, 0], [0, 0, 1]]
    assert mat3_det(g) == -1
    classes = [c.coords() for c in class_data(460)]
    assert classes == [(-3, 3, 17), (-3, 9, 10)]

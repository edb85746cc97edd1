import json
import random

import pytest

from mksurf.certify import (
    DEFAULT_HFE1_MODULI,
    build_hfe1_matrix,
    catalogue_congruence_obstructions,
    certify_e2_failure,
    certify_hfz,
    certify_sint_failure,
    check_certificate,
    verify_hfe1,
)
from mksurf.mat2 import Mat2, mat_mod, random_sl2z
from mksurf.quotients import commutator_test_modq


def test_hfz_families():
    c = certify_hfz(102, bound=2000)  # nu = 7 in the 2*nu^2 family
    assert c.conclusion
    fam = c.checks[0].data["candidates"]
    assert fam[0]["family"] == "i" and fam[0]["holds"]
    c = certify_hfz(24, bound=2000)  # nu = 1, vacuous factor condition
    assert c.conclusion
    fam = [f for f in c.checks[0].data["candidates"] if f["holds"]]
    assert fam[0]["family"] == "iii"
    # family (ii): nu = 11 = -1 (mod 12) with 11^2 = 25 (mod 32)
    c = certify_hfz(4 + 12 * 121, bound=500)
    assert c.conclusion
    fam = [f for f in c.checks[0].data["candidates"] if f["family"] == "ii"]
    assert fam and fam[0]["holds"]
    # nu = 5 fails the factor congruence and the certificate says which factor
    c = certify_hfz(4 + 12 * 25, bound=500)
    fam = [f for f in c.checks[0].data["candidates"] if f["family"] == "ii"]
    assert fam and not fam[0]["holds"] and fam[0]["evidence"]["offending"] == [5]


def test_hfz_not_applicable():
    c = certify_hfz(20, bound=100)
    assert not c.conclusion
    assert not c.checks[0].result


def test_hfz_search_overrides_family():
    # a level with points can never conclude, whatever the family audit says
    c = certify_hfz(108, bound=100)
    assert not c.conclusion
    by_name = {ch.name: ch for ch in c.checks}
    assert not by_name["integral-search-empty"].result


def test_sint_failure_positive():
    k = 4 + 20 * 139**2
    c = certify_sint_failure(k, 19, bound=1000, max_exp=3)
    assert c.conclusion
    assert c.parameters["ell"] == 19


def test_sint_failure_names_failing_clause():
    c = certify_sint_failure(102, 7, bound=200)
    assert not c.conclusion
    fam = c.checks[0].data["candidates"][0]
    assert fam["clauses"]["nu in {0, +-3, +-4} (mod 9)"] is False


def test_sint_failure_rejects_bad_ell():
    with pytest.raises(ValueError):
        certify_sint_failure(4 + 20 * 139**2, 9)   # not prime
    with pytest.raises(ValueError):
        certify_sint_failure(4 + 20 * 139**2, 3)   # divides 6
    # ell = 5 is a valid input but fails the family clause ell = +-1 (mod 5)
    c = certify_sint_failure(4 + 20 * 139**2, 5, bound=200, max_exp=1)
    assert not c.conclusion
    fam = c.checks[0].data["candidates"][0]
    assert fam["clauses"]["ell = +-1 (mod 5)"] is False


def test_build_hfe1_matrix():
    a = build_hfe1_matrix(139, 19)
    assert a == Mat2(386417, 462, 4182, 5)
    assert a.det() == 1
    assert mat_mod(a, 2) == mat_mod(Mat2(1, 0, 0, 1), 2)
    assert mat_mod(a, 3) == mat_mod(Mat2(-1, 0, 0, -1), 3)
    with pytest.raises(ValueError):
        build_hfe1_matrix(4, 19)       # 2 divides nu
    with pytest.raises(ValueError):
        build_hfe1_matrix(139, 7)      # 7 is not +-1 mod 5
    with pytest.raises(ValueError):
        build_hfe1_matrix(31, 19)      # 31 != 4 (mod 27)


def test_verify_hfe1_small_moduli():
    c = verify_hfe1(139, 19, local_moduli=(2, 3, 4, 5, 8, 9), sint_bound=400)
    assert c.conclusion
    for ch in c.checks:
        if ch.name.startswith("commutator-mod-"):
            assert ch.result and ch.data and "X" in ch.data


def test_verify_hfe1_tampered_matrix():
    good = build_hfe1_matrix(139, 19)
    bad = Mat2(good.a + 1, good.b, good.c, good.d)
    c = verify_hfe1(139, 19, local_moduli=(2, 3), sint_bound=50, matrix=bad)
    assert not c.conclusion
    assert not c.checks[0].result  # matrix shape check catches it


def test_certify_e2_failure():
    c = certify_e2_failure(139, 19, bound=1000, max_exp=3)
    assert c.conclusion
    by_name = {ch.name: ch for ch in c.checks}
    assert by_name["trace-admissible"].result


def random_with_trace(rng, t):
    alpha = rng.randint(-6, 6)
    z = Mat2(alpha, 1, alpha * (t - alpha) - 1, t - alpha)
    g = random_sl2z(rng, length=4, entry=2)
    return g * z * g.inverse()


def test_catalogue_matches_brute_force():
    rng = random.Random(91)
    for _ in range(100):
        t = 4 * rng.choice([-3, -2, -1, 1, 2, 3])
        z = random_with_trace(rng, t)
        obs = catalogue_congruence_obstructions(z)
        assert any(o["q"] == 4 and o["confirmed"] for o in obs), (t, z)
    for _ in range(100):
        t = rng.choice([1, 4, 5, 8]) + 9 * rng.randint(-3, 3)
        z = random_with_trace(rng, t)
        obs = catalogue_congruence_obstructions(z)
        assert any(o["q"] == 9 and o["confirmed"] for o in obs), (t, z)
    # spot-check the mod-16 exhaustive view on the 4|t family
    for _ in range(4):
        t = 4 * rng.choice([1, 2, 3, 4])
        z = random_with_trace(rng, t)
        ok, _ = commutator_test_modq(mat_mod(z, 16), 16)
        assert not ok


def test_catalogue_trace_15_clean():
    z = Mat2(2, 5, 5, 13)  # a genuine commutator representative
    assert z.det() == 1 and z.trace() == 15
    assert catalogue_congruence_obstructions(z) == []


def test_certificates_replay_deterministically():
    certs = [certify_hfz(102, bound=500),
             certify_sint_failure(4 + 20 * 139**2, 19, bound=300, max_exp=2),
             verify_hfe1(139, 19, local_moduli=(2, 3, 4), sint_bound=200)]
    for c in certs:
        blob = json.loads(c.to_json())
        ok, fresh = check_certificate(blob)
        assert ok
        blob2 = json.loads(c.to_json())
        assert blob2 == json.loads(c.to_json())  # byte-stable serialization
    bad = json.loads(certs[0].to_json())
    bad["checks"][0]["result"] = not bad["checks"][0]["result"]
    bad["conclusion"] = False
    ok, _ = check_certificate(bad)
    assert not ok

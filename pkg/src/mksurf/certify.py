"""Machine-checkable certificates for the Hasse-failure families over Z and
Z[1/l], the explicit locally-but-not-globally commutator matrices, and the
closed-form congruence obstruction catalogue."""

import json
import math
import time
from dataclasses import dataclass

from .mat2 import Mat2, commutator, mat_mod
from .markoff import admissible_k, admissible_t, search_integral, search_localized
from .quotients import DEFAULT_MODULUS_CAP, commutator_test_modq
from .rings import factorize, is_probable_prime

SCHEMA_VERSION = "1"
DEFAULT_HFZ_BOUND = 10**4
DEFAULT_SINT_BOUND = 10**3
DEFAULT_SINT_MAX_EXP = 3
DEFAULT_HFE1_MODULI = (2, 3, 4, 5, 7, 8, 9, 16, 27, 32)


@dataclass
class Check:
    name: str
    statement: str
    method: str  # "closed-form" | "exhaustive" | "oracle"
    result: bool
    data: object = None
    bound: object = None

    def to_dict(self):
        out = {"name": self.name, "statement": self.statement,
               "method": self.method, "result": self.result, "data": self.data}
        if self.bound is not None:
            out["bound"] = self.bound
        return out


@dataclass
class Certificate:
    kind: str  # E3FailureZ | E3FailureSInt | E2Failure | HFE1
    parameters: dict
    checks: list
    runtime_ms: int = 0

    @property
    def conclusion(self):
        return all(c.result for c in self.checks)

    def to_dict(self):
        return {
            "schema_version": SCHEMA_VERSION,
            "kind": self.kind,
            "parameters": self.parameters,
            "checks": [c.to_dict() for c in self.checks],
            "conclusion": self.conclusion,
            "runtime_ms": self.runtime_ms,
        }

    def to_json(self):
        return json.dumps(self.to_dict(), sort_keys=True, indent=2, default=_json_default)


def _json_default(o):
    if isinstance(o, (tuple, set, frozenset)):
        return list(o)
    raise TypeError("not JSON-serializable: %r" % (o,))


def _normalize(obj):
    return json.loads(json.dumps(obj, sort_keys=True, default=_json_default))


def _timed(build):
    t0 = time.time()
    cert = build()
    cert.runtime_ms = int((time.time() - t0) * 1000)
    return cert


def _prime_classes_check(nu, moduli_classes, modulus):
    """All prime factors of nu lie in the given residue classes; vacuous for
    nu = 1.  Returns (ok, factorization-evidence)."""
    fac = factorize(nu)
    bad = [p for p, _ in fac if p % modulus not in moduli_classes]
    return not bad, {"nu": nu, "factorization": fac, "offending": bad}


def _square_nu(value):
    """nu >= 1 with value = nu^2, or None."""
    if value <= 0:
        return None
    nu = math.isqrt(value)
    return nu if nu * nu == value else None


def certify_hfz(k, bound=DEFAULT_HFZ_BOUND):
    """Certificate that the level-k surface has no integer points, by
    membership in one of the three reciprocity-failure families, paired
    with an independent exhaustive search."""

    def build():
        checks = []
        families = []
        d = k - 4
        nu = _square_nu(d // 2) if d % 2 == 0 else None
        if nu is not None and d == 2 * nu * nu:
            ok, ev = _prime_classes_check(nu, {1, 7}, 8)
            families.append(("i", "k = 4 + 2*nu^2, prime factors of nu = +-1 (mod 8)", ok, ev))
        nu = _square_nu(d // 12) if d % 12 == 0 else None
        if nu is not None and d == 12 * nu * nu:
            ok, ev = _prime_classes_check(nu, {1, 11}, 12)
            ok2 = nu * nu % 32 == 25
            ev["nu_sq_mod_32"] = nu * nu % 32
            families.append(("ii", "k = 4 + 12*nu^2, nu^2 = 25 (mod 32), factors = +-1 (mod 12)",
                             ok and ok2, ev))
        nu = _square_nu(d // 20) if d % 20 == 0 else None
        if nu is not None and d == 20 * nu * nu:
            ok, ev = _prime_classes_check(nu, {1, 19}, 20)
            families.append(("iii", "k = 4 + 20*nu^2, prime factors of nu = +-1 (mod 20)", ok, ev))
        matched = [f for f in families if f[2]]
        checks.append(Check(
            name="family-membership",
            statement="k - 4 has one of the shapes 2*nu^2, 12*nu^2, 20*nu^2 "
                      "with the required factor congruences",
            method="closed-form",
            result=bool(matched),
            data={"k": k, "candidates": [{"family": f[0], "statement": f[1],
                                          "holds": f[2], "evidence": f[3]} for f in families]},
        ))
        empty = not search_integral(k, bound)
        checks.append(Check(
            name="integral-search-empty",
            statement="no integer point with all coordinates bounded",
            method="exhaustive",
            result=empty,
            data={"k": k},
            bound=bound,
        ))
        return Certificate("E3FailureZ", {"k": k, "bound": bound}, checks)

    return _timed(build)


def certify_sint_failure(k, ell, bound=DEFAULT_SINT_BOUND, max_exp=DEFAULT_SINT_MAX_EXP):
    """Certificate that the level-k surface has no Z[1/ell] points while
    being congruence-unobstructed, by the two S-integer families plus an
    independent bounded search over both denominator shapes."""
    if ell % 2 == 0 or ell % 3 == 0 or not is_probable_prime(ell):
        raise ValueError("ell must be a prime coprime to 6")

    def build():
        checks = []
        d = k - 4
        families = []
        nu = _square_nu(d // 2) if d % 2 == 0 else None
        if nu is not None and d == 2 * nu * nu:
            okl = ell % 8 in (1, 7)
            okf, ev = _prime_classes_check(nu, {1, 7}, 8)
            okn = nu % 9 in (0, 3, 6, 4, 5)
            ev["ell_mod_8"] = ell % 8
            ev["nu_mod_9"] = nu % 9
            clauses = {"ell = +-1 (mod 8)": okl,
                       "factors of nu = +-1 (mod 8)": okf,
                       "nu in {0, +-3, +-4} (mod 9)": okn}
            families.append(("2nu^2", clauses, okl and okf and okn, ev))
        nu = _square_nu(d // 20) if d % 20 == 0 else None
        if nu is not None and d == 20 * nu * nu:
            okl = ell % 5 in (1, 4)
            okf, ev = _prime_classes_check(nu, {1, 19}, 20)
            okn = nu % 9 in (4, 5)
            ev["ell_mod_5"] = ell % 5
            ev["nu_mod_9"] = nu % 9
            clauses = {"ell = +-1 (mod 5)": okl,
                       "factors of nu = +-1 (mod 20)": okf,
                       "nu = +-4 (mod 9)": okn}
            families.append(("20nu^2", clauses, okl and okf and okn, ev))
        matched = [f for f in families if f[2]]
        checks.append(Check(
            name="family-membership",
            statement="(k, ell) lies in one of the S-integer failure families",
            method="closed-form",
            result=bool(matched),
            data={"k": k, "ell": ell,
                  "candidates": [{"family": f[0], "clauses": f[1], "holds": f[2],
                                  "evidence": f[3]} for f in families]},
        ))
        checks.append(Check(
            name="no-congruence-obstruction",
            statement="k avoids 3 (mod 4) and +-3 (mod 9)",
            method="closed-form",
            result=admissible_k(k),
            data={"k_mod_4": k % 4, "k_mod_9": k % 9},
        ))
        pts = search_localized(k, ell, max_exp, bound)
        checks.append(Check(
            name="localized-search-empty",
            statement="no point in either denominator shape within bounds",
            method="exhaustive",
            result=not pts,
            data={"k": k, "ell": ell, "max_exp": max_exp,
                  "found": [repr(p) for p in pts[:5]]},
            bound=bound,
        ))
        return Certificate("E3FailureSInt",
                           {"k": k, "ell": ell, "bound": bound, "max_exp": max_exp},
                           checks)

    return _timed(build)


def build_hfe1_matrix(nu, ell):
    """The explicit trace 2+20*nu^2 matrix that is a commutator in every
    congruence quotient but not globally; integrality of the top-right
    entry is forced by nu = 4 (mod 27)."""
    if nu % 27 != 4:
        raise ValueError("nu must be 4 (mod 27)")
    ok, ev = _prime_classes_check(nu, {1, 19}, 20)
    if not ok:
        raise ValueError("prime factors of nu must be +-1 (mod 20): %r" % (ev,))
    if ell % 5 not in (1, 4) or not is_probable_prime(ell) or ell % 2 == 0:
        raise ValueError("ell must be a prime = +-1 (mod 5)")
    t = 2 + 20 * nu * nu
    b = 2 * (5 * nu - 2)
    if b % 3:
        raise AssertionError("unreachable: 3 | 5*nu - 2 under nu = 4 (mod 27)")
    a = Mat2(t - 5, b // 3, 6 * (5 * nu + 2), 5)
    if a.det() != 1:
        raise AssertionError("determinant contract failed")
    return a


def _local_commutator_check(task):
    """One modulus of the local verification; module-level so worker pools
    can pick it up."""
    entries, q, cap = task
    a = Mat2(*entries)
    replayed = False
    wdata = None
    try:
        ok, wit = commutator_test_modq(mat_mod(a, q), q, cap=cap)
    except ValueError as exc:
        ok, wdata = False, {"error": str(exc)}
    if ok:
        x, y = wit
        replayed = commutator(x, y) == mat_mod(a, q)
        wdata = {"X": [[e.v for e in (x.a, x.b)], [e.v for e in (x.c, x.d)]],
                 "Y": [[e.v for e in (y.a, y.b)], [e.v for e in (y.c, y.d)]]}
    return q, ok and replayed, wdata


def verify_hfe1(nu, ell, local_moduli=DEFAULT_HFE1_MODULI,
                sint_bound=DEFAULT_SINT_BOUND, sint_max_exp=DEFAULT_SINT_MAX_EXP,
                cap=DEFAULT_MODULUS_CAP, matrix=None, workers=1):
    """End-to-end certificate: the matrix is a commutator in every listed
    finite quotient (with recorded witnesses) yet the trace surface has no
    S-integer points, so it cannot be a commutator globally.

    The local verification necessarily truncates at the listed moduli; the
    certificate records them rather than claiming all prime powers.
    Passing matrix= audits a claimed matrix instead of the built one; the
    per-modulus checks are independent and fan out across workers.
    """

    def build():
        checks = []
        a = build_hfe1_matrix(nu, ell) if matrix is None else matrix
        t = 2 + 20 * nu * nu
        red2 = all(v.v == w for v, w in zip(mat_mod(a, 2).entries(), (1, 0, 0, 1)))
        red3 = all(v.v == w % 3 for v, w in zip(mat_mod(a, 3).entries(), (-1, 0, 0, -1)))
        checks.append(Check(
            name="matrix-shape",
            statement="det A = 1, A = I (mod 2), A = -I (mod 3)",
            method="closed-form",
            result=a.det() == 1 and red2 and red3,
            data={"matrix": [[a.a, a.b], [a.c, a.d]], "trace": t},
        ))
        tasks = [(a.entries(), q, cap) for q in local_moduli]
        if workers > 1:
            from concurrent.futures import ProcessPoolExecutor
            with ProcessPoolExecutor(max_workers=workers) as pool:
                results = list(pool.map(_local_commutator_check, tasks))
        else:
            results = [_local_commutator_check(t_) for t_ in tasks]
        for q, ok, wdata in results:
            checks.append(Check(
                name="commutator-mod-%d" % q,
                statement="A is a commutator in SL2(Z/%d) with a recorded witness" % q,
                method="exhaustive",
                result=ok,
                data=wdata,
                bound=q,
            ))
        sub = certify_sint_failure(t + 2, ell, bound=sint_bound, max_exp=sint_max_exp)
        checks.append(Check(
            name="nonsolvable-over-s-integers",
            statement="the level t+2 surface is a Hasse failure over Z[1/ell]",
            method="oracle",
            result=sub.conclusion,
            data=sub.to_dict(),
        ))
        checks.append(Check(
            name="trace-admissible",
            statement="t avoids the obstructed classes mod 16 and mod 9",
            method="closed-form",
            result=admissible_t(t),
            data={"t": t, "t_mod_16": t % 16, "t_mod_9": t % 9},
        ))
        return Certificate("HFE1",
                           {"nu": nu, "ell": ell, "local_moduli": list(local_moduli),
                            "sint_bound": sint_bound, "sint_max_exp": sint_max_exp},
                           checks)

    return _timed(build)


def certify_e2_failure(nu, ell, bound=DEFAULT_SINT_BOUND, max_exp=DEFAULT_SINT_MAX_EXP):
    """Trace-level failure certificate: t = 2 + 20*nu^2 is admissible but
    the underlying surface fails over Z[1/ell]."""

    def build():
        t = 2 + 20 * nu * nu
        checks = []
        checks.append(Check(
            name="trace-admissible",
            statement="t avoids the obstructed classes mod 16 and mod 9",
            method="closed-form",
            result=admissible_t(t),
            data={"t": t, "t_mod_16": t % 16, "t_mod_9": t % 9},
        ))
        sub = certify_sint_failure(t + 2, ell, bound=bound, max_exp=max_exp)
        checks.append(Check(
            name="surface-failure",
            statement="the level t+2 surface is a Hasse failure over Z[1/ell]",
            method="oracle",
            result=sub.conclusion,
            data=sub.to_dict(),
        ))
        return Certificate("E2Failure",
                           {"nu": nu, "ell": ell, "t": t,
                            "bound": bound, "max_exp": max_exp}, checks)

    return _timed(build)


def _unipotent_shape_obstruction(z, q):
    """Small-modulus shape test at q in {2, 3, 4}: Z or its transpose is
    +-(I + s*E12) mod q with s coprime to q."""
    for m in (z, z.transpose()):
        r = mat_mod(m, q)
        for eps in (1, q - 1):
            if r.a.v == eps and r.d.v == eps and r.c.v == 0:
                s = r.b.v
                if s and math.gcd(s, q) == 1:
                    return eps if eps == 1 else -1, s
    return None


def catalogue_congruence_obstructions(z):
    """Closed-form congruence obstructions to Z being a commutator over Z,
    each confirmed by the exhaustive finite-quotient oracle.

    Returns a list of dicts {q, reason, confirmed}.
    """
    if z.det() != 1:
        raise ValueError("Z must have determinant 1")
    t = z.trace()
    out = []
    if t % 4 == 0:
        ok, _ = commutator_test_modq(mat_mod(z, 4), 4)
        out.append({"q": 4, "reason": "trace divisible by 4", "confirmed": not ok})
    if t % 9 in (1, 4, 5, 8):
        ok, _ = commutator_test_modq(mat_mod(z, 9), 9)
        out.append({"q": 9, "reason": "trace = +-1 or +-4 (mod 9)", "confirmed": not ok})
    for q in (2, 3, 4):
        shape = _unipotent_shape_obstruction(z, q)
        if shape is not None:
            eps, s = shape
            ok, _ = commutator_test_modq(mat_mod(z, q), q)
            out.append({"q": q,
                        "reason": "unipotent shape %s(I + %d*E12) mod %d" %
                                  ("" if eps == 1 else "-", s, q),
                        "confirmed": not ok})
    return out


def check_certificate(cert_dict):
    """Replay a serialized certificate; returns (ok, regenerated dict).

    Deterministic: regenerating with the stored parameters must reproduce
    every check result and the conclusion.
    """
    kind = cert_dict.get("kind")
    params = cert_dict.get("parameters", {})
    if cert_dict.get("schema_version") != SCHEMA_VERSION:
        return False, {"error": "unknown schema version"}
    if kind == "E3FailureZ":
        fresh = certify_hfz(params["k"], bound=params.get("bound", DEFAULT_HFZ_BOUND))
    elif kind == "E3FailureSInt":
        fresh = certify_sint_failure(params["k"], params["ell"],
                                     bound=params.get("bound", DEFAULT_SINT_BOUND),
                                     max_exp=params.get("max_exp", DEFAULT_SINT_MAX_EXP))
    elif kind == "E2Failure":
        fresh = certify_e2_failure(params["nu"], params["ell"],
                                   bound=params.get("bound", DEFAULT_SINT_BOUND),
                                   max_exp=params.get("max_exp", DEFAULT_SINT_MAX_EXP))
    elif kind == "HFE1":
        fresh = verify_hfe1(params["nu"], params["ell"],
                            local_moduli=tuple(params.get("local_moduli", DEFAULT_HFE1_MODULI)),
                            sint_bound=params.get("sint_bound", DEFAULT_SINT_BOUND),
                            sint_max_exp=params.get("sint_max_exp", DEFAULT_SINT_MAX_EXP))
    else:
        return False, {"error": "unknown certificate kind %r" % (kind,)}
    fresh_dict = fresh.to_dict()
    old = _normalize({c["name"]: c["result"] for c in cert_dict["checks"]})
    new = _normalize({c["name"]: c["result"] for c in fresh_dict["checks"]})
    ok = old == new and cert_dict["conclusion"] == fresh_dict["conclusion"]
    return ok, fresh_dict

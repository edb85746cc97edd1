"""Command-line surface: JSON-first subcommands over the library, plus the
table reproduction targets."""

import argparse
import json
import os
import sys
from fractions import Fraction

from . import certify as cert
from . import expected_tables as expected
from .markoff import (
    MarkoffPoint,
    admissible_k,
    admissible_t,
    apply_path,
    class_data,
    default_class_bound,
    reduce_point,
    same_orbit,
    search_integral,
    search_localized,
)
from .mat2 import Mat2
from .lifting import find_trace_set_matrix, lift_point, universal_pair
from .quadforms import form_isotropic, hasse_profile
from .quotients import BudgetExceeded, commutator_test_modq, trace_commutator_image
from .rings import INF, LocalizedInt, ModInt, parse_ring
from .words import (
    alg1_representatives,
    embedding_matrix,
    in_derived_subgroup,
    metabelian_image,
    second_derived_congruence,
    table1_trace_filter,
    word,
)

EXIT_OK = 0
EXIT_BAD_INPUT = 2
EXIT_BUDGET = 3


def _encode(obj):
    if isinstance(obj, Mat2):
        entries = [[_encode(obj.a), _encode(obj.b)], [_encode(obj.c), _encode(obj.d)]]
        first = obj.a
        if isinstance(first, ModInt):
            return {"ring": "Zmod", "q": first.q, "entries": entries}
        if isinstance(first, LocalizedInt):
            return {"ring": "Z1/L", "ell": first.ell, "entries": entries}
        if isinstance(first, Fraction):
            return {"ring": "Q", "entries": entries}
        return {"ring": "Z", "entries": entries}
    if isinstance(obj, MarkoffPoint):
        return {"coords": [_encode(c) for c in obj.coords()], "k": _encode(obj.k)}
    if isinstance(obj, ModInt):
        return obj.v
    if isinstance(obj, LocalizedInt):
        return str(obj) if obj.exp else obj.num
    if isinstance(obj, Fraction):
        return str(obj) if obj.denominator != 1 else obj.numerator
    if isinstance(obj, (list, tuple)):
        return [_encode(x) for x in obj]
    if isinstance(obj, (set, frozenset)):
        return sorted(_encode(x) for x in obj)
    if isinstance(obj, dict):
        return {str(k): _encode(v) for k, v in obj.items()}
    if obj == INF:
        return "inf"
    return obj


def _emit(payload, fmt):
    payload = _encode(payload)
    if fmt == "text":
        for k, v in payload.items():
            print("%s: %s" % (k, v))
    else:
        print(json.dumps(payload, sort_keys=True, indent=2))


def _parse_ints(text, n=None):
    parts = [int(p) for p in text.replace(" ", "").split(",") if p]
    if n is not None and len(parts) != n:
        raise ValueError("expected %d comma-separated integers, got %r" % (n, text))
    return parts


def _parse_mat(text):
    return Mat2(*_parse_ints(text, 4))


def _parse_order(text):
    s = str(text).lower()
    if s in ("inf", "infinity", "oo", "0"):
        return None
    return int(s)


def _order_str(o):
    return "inf" if o is None else o


# --- subcommand handlers ------------------------------------------------------

def _cmd_markoff_reduce(args):
    p = MarkoffPoint.make(*_parse_ints(args.point, 3))
    if args.k is not None and p.k != args.k:
        raise ValueError("point has level %d, not %d" % (p.k, args.k))
    nf, path = reduce_point(p)
    assert apply_path(path, nf).coords() == p.coords()
    return {"k": p.k, "point": list(p.coords()), "normal_form": list(nf.coords()),
            "path_length": len(path),
            "path": [repr(m) for m in path]}


def _cmd_markoff_class(args):
    bound = args.bound if args.bound is not None else default_class_bound(args.k)
    classes = class_data(args.k, bound)
    out = []
    for rep in classes:
        sample = set()
        for pt in search_integral(args.k, max(10, rep.maxabs() * 3)):
            if same_orbit(pt, rep):
                sample.add(tuple(pt.coords()))
            if len(sample) >= 12:
                break
        out.append({"rep": list(rep.coords()), "orbit_sample": sorted(sample)[:5],
                    "bound": bound})
    return {"k": args.k, "classes": out, "hhat": len(classes)}


def _cmd_markoff_search(args):
    if args.ell is not None:
        pts = search_localized(args.k, args.ell, args.max_exp, args.bound)
    else:
        pts = search_integral(args.k, args.bound)
    return {"k": args.k, "bound": args.bound, "ell": args.ell,
            "count": len(pts), "points": [p for p in pts[:args.limit]]}


def _cmd_markoff_admissible(args):
    if args.k is not None:
        return {"k": args.k, "admissible_k": admissible_k(args.k),
                "k_mod_4": args.k % 4, "k_mod_9": args.k % 9}
    t = args.t
    out = {"t": t, "admissible_t": admissible_t(t),
           "t_mod_16": t % 16, "t_mod_9": t % 9,
           "k": t + 2, "admissible_k": admissible_k(t + 2)}
    if out["admissible_k"] and not out["admissible_t"]:
        out["note"] = ("surface level t+2 is congruence-unobstructed while t "
                       "hits the trace obstruction list; the two tests "
                       "genuinely differ here")
    return out


def _cmd_quadform_profile(args):
    p = MarkoffPoint.make(*_parse_ints(args.point, 3))
    if args.k is not None and p.k != args.k:
        raise ValueError("point has level %d, not %d" % (p.k, args.k))
    prof = hasse_profile(p)
    return {"k": p.k, "point": list(p.coords()),
            "profile": {("inf" if pl == INF else str(pl)): v for pl, v in prof.entries},
            "product": prof.product()}


def _cmd_quadform_isotropy(args):
    classes = class_data(args.k, args.bound)
    out = []
    for rep in classes:
        verdict, data = form_isotropic(rep, witness_bound=args.witness_bound)
        out.append({"rep": list(rep.coords()), "verdict": verdict, "data": data})
    return {"k": args.k, "classes": out}


def _cmd_lift_point(args):
    z = _parse_mat(args.z)
    p = MarkoffPoint.make(*_parse_ints(args.point, 3))
    if args.y:
        y = _parse_mat(args.y)
    else:
        y = None
        for x in p.coords():
            y = find_trace_set_matrix(z, x, bound=args.y_bound)
            if y is not None:
                break
        if y is None:
            raise ValueError("no trace-set matrix Y found within entry bound %d; "
                             "this does not certify that none exists" % args.y_bound)
    res = lift_point(z, p, y)
    return {"z": z, "point": list(p.coords()), "x": res.x, "y": res.y,
            "orientation": res.orientation, "row": list(res.row)}


def _cmd_lift_universal(args):
    ring = parse_ring(args.ring)
    x, y = universal_pair(args.t, Fraction(args.eps), ring)
    w = x * y * x.inverse() * y.inverse()
    return {"t": args.t, "ring": str(ring), "eps": args.eps,
            "x": x, "y": y, "commutator": w, "trace": w.trace()}


def _cmd_words_alg1(args):
    m, n = _parse_order(args.m), _parse_order(args.n)
    reps = alg1_representatives(m, n, args.t)
    return {"m": _order_str(m), "n": _order_str(n), "t": args.t,
            "words": [str(w) for w in reps],
            "in_derived_subgroup": [str(w) for w in reps if in_derived_subgroup(m, n, w)]}


def _cmd_words_metab(args):
    m, n = _parse_order(args.m), _parse_order(args.n)
    w = word(m, n, args.word)
    in_g = in_derived_subgroup(m, n, w)
    out = {"m": _order_str(m), "n": _order_str(n), "word": str(w),
           "in_derived_subgroup": in_g}
    if in_g:
        img = metabelian_image(m, n, w)
        from .words import is_unit_in_S
        out["image"] = {("x%d y%d" % (i, j)): c for (i, j), c in sorted(img.coeffs.items())}
        out["image_str"] = repr(img)
        out["is_unit"] = is_unit_in_S(m, n, img)
    return out


def _cmd_quotient_image(args):
    img = trace_commutator_image(args.q, cap=args.cap)
    return {"q": args.q, "image": sorted(img),
            "excluded": sorted(set(range(args.q)) - img)}


def _cmd_quotient_test(args):
    z = _parse_mat(args.z)
    ok, wit = commutator_test_modq(z, args.q, cap=args.cap)
    out = {"q": args.q, "z": z, "is_commutator": ok}
    if ok:
        out["witness"] = {"x": wit[0], "y": wit[1]}
    return out


def _cmd_certify_hfz(args):
    c = cert.certify_hfz(args.k, bound=args.bound)
    return c.to_dict()


def _cmd_certify_sint(args):
    c = cert.certify_sint_failure(args.k, args.ell, bound=args.bound,
                                  max_exp=args.max_exp)
    return c.to_dict()


def _cmd_certify_hfe1(args):
    moduli = tuple(_parse_ints(args.moduli)) if args.moduli else cert.DEFAULT_HFE1_MODULI
    workers = int(os.environ.get("MKSURF_WORKERS", "1"))
    c = cert.verify_hfe1(args.nu, args.ell, local_moduli=moduli, workers=workers)
    return c.to_dict()


def _cmd_certify_check(args):
    with open(args.file) as fh:
        d = json.load(fh)
    ok, fresh = cert.check_certificate(d)
    return {"file": args.file, "replay_matches": ok, "conclusion": fresh.get("conclusion")}


# --- reproduction targets -----------------------------------------------------

def _word_class_key(w):
    from .words import conjugacy_class_key
    k1 = conjugacy_class_key(w.cyclic_reduction())
    k2 = conjugacy_class_key(w.inverse().cyclic_reduction())
    return min(k1, k2)


def repro(table):
    """Regenerate a table and diff it against the committed expectation.

    Returns (ok, report dict).
    """
    if table == "t1":
        rows = []
        ok = True
        for (m, n), exp in expected.TABLE1.items():
            modulus, lams = second_derived_congruence(m, n)
            got = {"trace_c": embedding_matrix(m, n, "c").trace(),
                   "lambdas": sorted(lams), "modulus": modulus,
                   "traces": table1_trace_filter(m, n)}
            match = got == exp
            ok &= match
            rows.append({"m": _order_str(m), "n": _order_str(n),
                         "expected": exp, "computed": got, "match": match})
        return ok, {"table": "t1", "rows": rows}
    if table == "rt":
        rows = []
        ok = True
        for (m, n, t), (exp_words, exp_derived) in expected.RT_TABLE.items():
            reps = alg1_representatives(m, n, t)
            got_keys = {_word_class_key(w) for w in reps}
            exp_keys = {_word_class_key(word(m, n, s)) for s in exp_words}
            got_der = {_word_class_key(w) for w in reps if in_derived_subgroup(m, n, w)}
            exp_der = {_word_class_key(word(m, n, s)) for s in exp_derived}
            match = got_keys == exp_keys and got_der == exp_der
            ok &= match
            rows.append({"m": _order_str(m), "n": _order_str(n), "t": t,
                         "computed": [str(w) for w in reps],
                         "expected": exp_words, "match": match})
        return ok, {"table": "rt", "rows": rows}
    if table == "genus329":
        classes = class_data(329)
        rows = []
        ok = len(classes) == len(expected.GENUS_329)
        for rep, exp in zip(classes, expected.GENUS_329):
            prof = hasse_profile(rep)
            got = {("inf" if p == INF else str(p)): v for p, v in prof.entries}
            match = list(rep.coords()) == exp["rep"] and got == exp["profile"] \
                and prof.product() == 1
            ok &= match
            rows.append({"rep": list(rep.coords()), "profile": got,
                         "expected": exp, "match": match})
        return ok, {"table": "genus329", "rows": rows}
    if table == "classnumbers":
        rows = []
        ok = True
        for k, h in sorted(expected.CLASS_NUMBERS.items()):
            got = len(class_data(k))
            ok &= got == h
            rows.append({"k": k, "expected": h, "computed": got, "match": got == h})
        return ok, {"table": "classnumbers", "rows": rows}
    if table == "hfu2-images":
        rows = []
        ok = True
        for q, exp in sorted(expected.HFU2_IMAGES.items()):
            got = sorted(trace_commutator_image(q))
            ok &= got == exp
            rows.append({"q": q, "expected": exp, "computed": got, "match": got == exp})
        return ok, {"table": "hfu2-images", "rows": rows}
    if table == "embeddings":
        rows = []
        ok = True
        for (m, n), gens in expected.EMBEDDINGS.items():
            for g, exp_mat in gens.items():
                got = embedding_matrix(m, n, g).rows()
                ok &= got == exp_mat
                rows.append({"m": _order_str(m), "n": _order_str(n), "gen": g,
                             "expected": exp_mat, "computed": got,
                             "match": got == exp_mat})
        return ok, {"table": "embeddings", "rows": rows}
    raise ValueError("unknown table %r" % (table,))


def _cmd_repro(args):
    ok, report = repro(args.table)
    report["ok"] = ok
    if args.out:
        with open(args.out, "w") as fh:
            json.dump(_encode(report), fh, sort_keys=True, indent=2)
    return report


# --- parser -------------------------------------------------------------------

def build_parser():
    ap = argparse.ArgumentParser(prog="mksurf",
                                 description="Markoff surfaces, commutator lifting, "
                                             "and Hasse-failure certificates")
    ap.add_argument("--format", choices=("json", "text"), default="json")
    ap.add_argument("--seed", type=int, default=0,
                    help="recorded in the output; all computations are deterministic")
    sub = ap.add_subparsers(dest="group", required=True)

    mk = sub.add_parser("markoff").add_subparsers(dest="cmd", required=True)
    p = mk.add_parser("reduce")
    p.add_argument("--k", type=int)
    p.add_argument("--point", required=True)
    p.set_defaults(func=_cmd_markoff_reduce)
    p = mk.add_parser("class")
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--bound", type=int)
    p.set_defaults(func=_cmd_markoff_class)
    p = mk.add_parser("search")
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--bound", type=int, required=True)
    p.add_argument("--ell", type=int)
    p.add_argument("--max-exp", type=int, default=3)
    p.add_argument("--limit", type=int, default=50)
    p.set_defaults(func=_cmd_markoff_search)
    p = mk.add_parser("admissible")
    g = p.add_mutually_exclusive_group(required=True)
    g.add_argument("--k", type=int)
    g.add_argument("--t", type=int)
    p.set_defaults(func=_cmd_markoff_admissible)

    qf = sub.add_parser("quadform").add_subparsers(dest="cmd", required=True)
    p = qf.add_parser("profile")
    p.add_argument("--k", type=int)
    p.add_argument("--point", required=True)
    p.set_defaults(func=_cmd_quadform_profile)
    p = qf.add_parser("isotropy")
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--bound", type=int)
    p.add_argument("--witness-bound", type=int, default=600)
    p.set_defaults(func=_cmd_quadform_isotropy)

    lf = sub.add_parser("lift").add_subparsers(dest="cmd", required=True)
    p = lf.add_parser("point")
    p.add_argument("--z", required=True, help="matrix a,b,c,d")
    p.add_argument("--point", required=True)
    p.add_argument("--y", help="matrix a,b,c,d; searched within --y-bound if omitted")
    p.add_argument("--y-bound", type=int, default=12)
    p.set_defaults(func=_cmd_lift_point)
    p = lf.add_parser("universal")
    p.add_argument("--t", type=int, required=True)
    p.add_argument("--ring", default="z1/6")
    p.add_argument("--eps", default="2")
    p.set_defaults(func=_cmd_lift_universal)

    wd = sub.add_parser("words").add_subparsers(dest="cmd", required=True)
    p = wd.add_parser("alg1")
    p.add_argument("--m", required=True)
    p.add_argument("--n", required=True)
    p.add_argument("--t", type=int, required=True)
    p.set_defaults(func=_cmd_words_alg1)
    p = wd.add_parser("metab")
    p.add_argument("--m", required=True)
    p.add_argument("--n", required=True)
    p.add_argument("--word", required=True)
    p.set_defaults(func=_cmd_words_metab)

    qt = sub.add_parser("quotient").add_subparsers(dest="cmd", required=True)
    p = qt.add_parser("image")
    p.add_argument("--q", type=int, required=True)
    p.add_argument("--cap", type=int, default=64)
    p.set_defaults(func=_cmd_quotient_image)
    p = qt.add_parser("test")
    p.add_argument("--q", type=int, required=True)
    p.add_argument("--z", required=True, help="matrix a,b,c,d")
    p.add_argument("--cap", type=int, default=64)
    p.set_defaults(func=_cmd_quotient_test)

    cf = sub.add_parser("certify").add_subparsers(dest="cmd", required=True)
    p = cf.add_parser("hfz")
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--bound", type=int, default=cert.DEFAULT_HFZ_BOUND)
    p.set_defaults(func=_cmd_certify_hfz)
    p = cf.add_parser("sint")
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--ell", type=int, required=True)
    p.add_argument("--bound", type=int, default=cert.DEFAULT_SINT_BOUND)
    p.add_argument("--max-exp", type=int, default=cert.DEFAULT_SINT_MAX_EXP)
    p.set_defaults(func=_cmd_certify_sint)
    p = cf.add_parser("hfe1")
    p.add_argument("--nu", type=int, required=True)
    p.add_argument("--ell", type=int, required=True)
    p.add_argument("--moduli", help="comma-separated moduli, default %s"
                                    % (cert.DEFAULT_HFE1_MODULI,))
    p.set_defaults(func=_cmd_certify_hfe1)
    p = cf.add_parser("check")
    p.add_argument("--file", required=True)
    p.set_defaults(func=_cmd_certify_check)

    p = sub.add_parser("repro")
    p.add_argument("table", choices=("t1", "rt", "genus329", "classnumbers",
                                     "hfu2-images", "embeddings"))
    p.add_argument("--out")
    p.set_defaults(func=_cmd_repro)
    return ap


def run(argv):
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as exc:
        return exc.code if exc.code is not None else EXIT_BAD_INPUT
    try:
        payload = args.func(args)
    except BudgetExceeded as exc:
        _emit({"error": str(exc), "kind": "budget"}, args.format)
        return EXIT_BUDGET
    except (ValueError, OSError) as exc:
        _emit({"error": str(exc), "kind": "invalid-input"}, args.format)
        return EXIT_BAD_INPUT
    if isinstance(payload, dict):
        payload.setdefault("seed", args.seed)
    _emit(payload, args.format)
    if args.group == "repro" and not payload.get("ok", True):
        return 1
    return EXIT_OK


def main():
    sys.exit(run(sys.argv[1:]))


if __name__ == "__main__":
    main()

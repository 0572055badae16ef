"""Command line front end.

Exit codes: 0 when every check passes, 1 when a violation is found, 2 for
usage errors and parameters beyond the supported caps.
"""
from __future__ import annotations

import argparse
import json
import logging
import os
import random
import sys
from fractions import Fraction
from typing import Optional

log = logging.getLogger("arrkpi")

CAP_GEOMETRIC = 4
CAP_ARTIN = 3


class CapExceeded(ValueError):
    pass


# ----------------------------------------------------------------------------
# arrangement sources


def split_spec(spec: str) -> tuple:
    name, _, rest = spec.partition(":")
    params = {}
    for item in filter(None, rest.split(",")):
        key, eq, val = item.partition("=")
        if not eq:
            raise ValueError(f"bad family parameter {item!r}")
        params[key.strip()] = Fraction(val.strip())
    return name.strip(), params


def parse_family(spec: str, defaults: Optional[dict] = None):
    """``"H:k=1,n=2"``, ``"K:k=1,n=2,box=2"``, ``"B:n=3"``, ``"D:n=3"``,
    ``"A:n=3"`` (skewed A).  ``box=b`` means ``[-b, b]^n``; for ``K`` it
    defaults to ``2k``.  Parameters missing from the spec are taken from
    *defaults*."""
    from .families import family_H, family_K, reflection_arrangement

    name, params = split_spec(spec)
    for key, val in (defaults or {}).items():
        if key not in params and val is not None:
            params[key] = Fraction(val)
    if name in ("H", "K") and "k" not in params:
        raise ValueError(f"family {name} needs k")
    n = int(params.get("n", 0))
    if n > CAP_GEOMETRIC:
        raise CapExceeded(f"n={n} exceeds the geometric cap {CAP_GEOMETRIC}")
    region = None
    if "box" in params:
        region = [(-params["box"], params["box"])] * n
    if name == "H":
        return family_H(int(params["k"]), n)
    if name == "K":
        k = int(params["k"])
        b = params.get("box", Fraction(2 * k))
        return family_K(k, n, [(-b, b)] * n)
    kinds = {"A": "skewedA", "skewedA": "skewedA", "B": "B", "D": "D"}
    if name in kinds:
        return reflection_arrangement(kinds[name], n, region)
    raise ValueError(f"unknown family {name!r}")


def load_arrangement(args):
    from .arrangement import Arrangement

    if args.file:
        with open(args.file) as fh:
            a = Arrangement.from_json(json.load(fh))
        if a.dim > CAP_GEOMETRIC:
            raise CapExceeded(f"dimension {a.dim} exceeds the geometric cap {CAP_GEOMETRIC}")
        return a
    if args.family:
        return parse_family(args.family, {"k": args.k, "n": args.n})
    raise ValueError("give --family or --file")


def _window(text):
    if text is None:
        return None
    out = []
    for part in text.split(";"):
        lo, hi = part.split(",")
        out.append((Fraction(lo), Fraction(hi)))
    return out


# ----------------------------------------------------------------------------
# commands


def cmd_fans(args) -> tuple:
    from .arrangement import build_dual_complex

    a = load_arrangement(args)
    dc = build_dual_complex(a)
    doc = {
        "arrangement": a.to_json(),
        "fan_count": len(dc.fans),
        "counts_by_dim": {str(k): v for k, v in sorted(dc.counts_by_dim().items())},
        "chamber_count": len(dc.chambers),
        "bounded_count": len(dc.bounded_fans()),
        "fans": [
            {"covector": list(f.covector), "dim": f.dim, "bounded": f.bounded} for f in dc.fans
        ],
    }
    summary = f"{len(dc.fans)} fans, {len(dc.chambers)} chambers"
    return 0, doc, summary


def _suite(checks: list) -> tuple:
    ok = all(c["ok"] for c in checks)
    failed = [c["name"] for c in checks if not c["ok"]]
    summary = f"{len(checks)} checks, " + ("all passed" if ok else "failed: " + ", ".join(failed))
    return (0 if ok else 1), {"checks": checks}, summary


def _check(name, ok, witness=None, **extra):
    d = {"name": name, "ok": bool(ok)}
    if witness is not None:
        d["witness"] = witness
    d.update(extra)
    return d


def verify_admissible(args) -> tuple:
    from .families import h_prediction, parity_prediction, verify_admissible as run

    if args.positional:
        fam = args.positional
        if len(fam) != 3:
            raise ValueError("positional form is FAMILY K N, e.g. 'K 1 2'")
        k, n = int(fam[1]), int(fam[2])
        spec = f"{fam[0]}:k={k},n={n}"
        args.family = spec
    a = load_arrangement(args)
    rep = run(a, _window(args.window))
    checks = [
        _check(
            "admissible",
            rep.ok,
            [{"vertex": [str(x) for x in f.vertex], "reason": f.result.reason} for f in rep.failures()][:20] or None,
            vertex_count=len(rep.vertices),
        )
    ]
    name, params = split_spec(args.family) if args.family else (None, {})
    if name == "K" and rep.ok:
        k = int(params.get("k", args.k))
        bad = [
            [str(x) for x in v.vertex]
            for v in rep.vertices
            if v.result.kinds() != parity_prediction(v.vertex, k)
        ]
        checks.append(_check("parity_prediction", not bad, bad[:20] or None))
    if name == "H" and rep.ok:
        bad = [[str(x) for x in v.vertex] for v in rep.vertices if v.result.kinds() != h_prediction(v.vertex)]
        checks.append(_check("block_prediction", not bad, bad[:20] or None))
    code, doc, summary = _suite(checks)
    doc["report"] = rep.to_json() if args.full else {"vertex_count": len(rep.vertices)}
    return code, doc, summary


def verify_coxeter(args) -> tuple:
    from . import coxmodel as cm
    from .posetlab import is_bowtie_free, is_partial_order, is_upward_flag

    n = args.n or 2
    if n > CAP_GEOMETRIC:
        raise CapExceeded(f"n={n} exceeds the geometric cap {CAP_GEOMETRIC}")
    bn = cm.bn_complex(n)
    sp = bn.s_relation_poset()
    checks = [_check("s_order_partial", is_partial_order(sp.leq).ok)]
    up = bn.u_relation_poset()
    checks.append(_check("u_order_partial", is_partial_order(up.leq).ok))
    s = bn.s_poset()
    for name, chk in (("bn_bowtie_free", is_bowtie_free(s)), ("bn_upward_flag", is_upward_flag(s))):
        checks.append(_check(name, chk.ok, None if chk.ok else [str(x) for x in chk.witness]))
    pp = cm.positive_part(n).s_poset()
    for name, chk in (("positive_bowtie_free", is_bowtie_free(pp)), ("positive_upward_flag", is_upward_flag(pp))):
        checks.append(_check(name, chk.ok, None if chk.ok else [str(x) for x in chk.witness]))
    sph = cm.an_sphere(n)
    checks.append(_check("sphere_cross_check", not sph.cross_check()))
    checks.append(_check("sphere_flag", sph.is_flag().ok))
    fav = cm.fake_adjacent_violations(n)
    checks.append(_check("fake_above_real", not fav, [[str(a), str(b)] for a, b in fav[:20]] or None))
    inv = cm.inversion_violations(n)
    checks.append(_check("inversion", not inv, [[str(x) for x in v] for v in inv[:20]] or None))
    if n >= 3:
        probs = cm.dn_isomorphism_check(cm.dn_subdivision(n))
        checks.append(_check("dn_isomorphism", not probs, [str(p) for p in probs[:20]] or None))
    if n == 2:
        w = cm.contrast_witness(2)
        checks.append(_check("contrast_witness_found", w is not None, [str(x) for x in w] if w else None))
    return _suite(checks)


def verify_poset(args) -> tuple:
    from .posetlab import (
        FinitePoset,
        PosetError,
        is_bowtie_free,
        is_downward_flag,
        is_graded,
        is_lattice,
        is_partial_order,
        is_upward_flag,
    )

    if not args.poset:
        raise ValueError("give --poset FILE")
    with open(args.poset) as fh:
        doc = json.load(fh)
    p = FinitePoset.from_json(doc)
    checks = [_check("partial_order", is_partial_order(p.leq).ok)]
    for name, fn in (("bowtie_free", is_bowtie_free), ("upward_flag", is_upward_flag), ("downward_flag", is_downward_flag)):
        c = fn(p)
        checks.append(_check(name, c.ok, None if c.ok else [str(x) for x in c.witness]))
    code, out, summary = _suite(checks)
    graded = is_graded(p)
    out["graded"] = graded
    try:
        out["lattice"] = is_lattice(p)
    except PosetError:
        out["lattice"] = None
    return code, out, summary


def verify_salvetti(args) -> tuple:
    from .arrangement import build_dual_complex
    from .salvetti import build_salvetti, check_retraction_property

    a = load_arrangement(args)
    dc = build_dual_complex(a)
    s = build_salvetti(dc)
    counts = s.counts()
    expected = [0] * (a.dim + 1)
    for f in dc.fans:
        expected[a.dim - f.dim] += len(dc.face_of[f.covector])
    while expected and expected[-1] == 0:
        expected.pop()
    checks = [_check("cell_counts", counts == expected, None, counts=counts)]
    chi = s.euler_characteristic()
    if a.is_central() and a.hyperplanes:
        checks.append(_check("euler_zero", chi == 0, None, euler_characteristic=chi))
    fails = check_retraction_property(s)
    checks.append(_check("retraction", not fails, [str(f) for f in fails[:20]] or None))
    return _suite(checks)


def verify_orthoscheme(args) -> tuple:
    from .orthoscheme import cube_space, linf, string_distance

    n = args.n or 2
    if n > 3:
        raise CapExceeded("orthoscheme checks support n <= 3")
    level = args.level
    rng = random.Random(args.seed)
    sp = cube_space(n)
    D = 2 ** (level - 1)
    worst = Fraction(0)
    bad = []
    for _ in range(args.pairs):
        x = tuple(Fraction(rng.randint(-D, D), D) for _ in range(n))
        y = tuple(Fraction(rng.randint(-D, D), D) for _ in range(n))
        d = string_distance(sp, sp.from_ambient(x), sp.from_ambient(y), level)
        err = abs(d - linf(x, y))
        worst = max(worst, err)
        if err > args.tolerance:
            bad.append({"x": [str(c) for c in x], "y": [str(c) for c in y], "string": str(d)})
    return _suite([_check("cube_isometry", not bad, bad[:20] or None, max_error=float(worst))])


def verify_artin(args) -> tuple:
    from .artinball import deligne_ball, run_all

    n = args.n or 2
    if n > CAP_ARTIN:
        raise CapExceeded(f"n={n} exceeds the Artin cap {CAP_ARTIN}")
    db = deligne_ball(n, args.L)
    reports = run_all(db, args.margin, args.jobs)
    checks = [_check(name, r.ok, None, **r.to_json()) for name, r in reports.items()]
    code, doc, summary = _suite(checks)
    doc["ball"] = db.to_json()
    return code, doc, summary


def cmd_verify(args) -> tuple:
    return {
        "admissible": verify_admissible,
        "coxeter": verify_coxeter,
        "poset": verify_poset,
        "salvetti": verify_salvetti,
        "orthoscheme": verify_orthoscheme,
        "artin": verify_artin,
    }[args.suite](args)


def cmd_export(args) -> tuple:
    what = args.what
    if what == "hasse":
        from .coxmodel import bn_complex, to_dot

        n = args.n or 2
        if n > CAP_GEOMETRIC:
            raise CapExceeded(f"n={n} exceeds the geometric cap {CAP_GEOMETRIC}")
        p = bn_complex(n).s_poset()
        if args.format == "json":
            return 0, p.to_json(), f"{len(p)} elements"
        return 0, to_dot(p), f"{len(p)} nodes"
    if what == "salvetti":
        from .arrangement import build_dual_complex
        from .salvetti import build_salvetti, to_dot, to_json

        s = build_salvetti(build_dual_complex(load_arrangement(args)))
        if args.format == "json":
            return 0, to_json(s), f"{len(s)} cells"
        return 0, to_dot(s), f"{len(s.edges())} edges"
    if what == "ball":
        from .artinball import deligne_ball

        n = args.n or 2
        if n > CAP_ARTIN:
            raise CapExceeded(f"n={n} exceeds the Artin cap {CAP_ARTIN}")
        db = deligne_ball(n, args.L)
        if args.format == "json":
            return 0, db.to_json(), f"{len(db)} vertices"
        return 0, db.to_dot(), f"{len(db)} vertices"
    if what == "fans":
        return cmd_fans(args)
    raise ValueError(f"unknown export {what!r}")


# ----------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--family", help='family spec, e.g. "H:k=1,n=2" or "K:k=1,n=2,box=2"')
    common.add_argument("--file", help="arrangement JSON file")
    common.add_argument("--n", type=int)
    common.add_argument("--k", type=int)
    common.add_argument("--L", type=int, default=2)
    common.add_argument("--level", type=int, default=4)
    common.add_argument("--tolerance", type=float, default=1e-6)
    common.add_argument("--margin", type=int, default=2)
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--jobs", type=int, default=1)
    common.add_argument("--pairs", type=int, default=50)
    common.add_argument("--window", help='"lo,hi;lo,hi;..." validation window')
    common.add_argument("--poset", help="poset JSON file")
    common.add_argument("--format", choices=("dot", "json"), default="dot")
    common.add_argument("--full", action="store_true", help="include per-item details")
    common.add_argument("--out", help="write the report here instead of stdout")

    p = argparse.ArgumentParser(prog="arrkpi", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)
    sub.add_parser("fans", parents=[common], help="list the fans of an arrangement")
    v = sub.add_parser("verify", parents=[common], help="run a verification suite")
    v.add_argument("suite", choices=("admissible", "coxeter", "poset", "salvetti", "orthoscheme", "artin"))
    v.add_argument("positional", nargs="*", help="shorthand family for admissible: FAMILY K N")
    e = sub.add_parser("export", parents=[common], help="export DOT or JSON artifacts")
    e.add_argument("what", choices=("hasse", "salvetti", "ball", "fans"))
    return p


def _emit(doc, out):
    text = doc if isinstance(doc, str) else json.dumps(doc, indent=2, sort_keys=True, default=str) + "\n"
    if out:
        with open(out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def main(argv=None) -> int:
    level = os.environ.get("ARRKPI_LOG", "WARNING").upper()
    logging.basicConfig(level=getattr(logging, level, logging.WARNING), format="%(levelname)s %(message)s")
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.jobs < 1:
        parser.error("--jobs must be positive")
    handler = {"fans": cmd_fans, "verify": cmd_verify, "export": cmd_export}[args.command]
    try:
        code, doc, summary = handler(args)
    except CapExceeded as exc:
        print(f"arrkpi: {exc}", file=sys.stderr)
        return 2
    except (ValueError, KeyError, OSError) as exc:
        print(f"arrkpi: error: {exc}", file=sys.stderr)
        return 2
    _emit(doc, args.out)
    print(summary, file=sys.stderr)
    log.info("exit code %d", code)
    return code


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())

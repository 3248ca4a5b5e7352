"""Command-line frontend: isoclass tables, Hall numbers and polynomials,
primitive-subspace bases, the verification suite, and Fourier checks.

Exit codes: 0 success, 1 verification failure, 2 usage error, 3 internal
inconsistency.  Reports are deterministic given identical parameters;
per-grade results of the brute-force engines can be cached on disk and
warm runs reproduce cold-run output byte for byte.
"""

from __future__ import annotations

import argparse
import json
import os
import sys

from . import __version__
from .fourier import (
    a2_image_check,
    a2_reversal,
    check_homomorphism,
    divided_power_check,
    double_transform_check,
    gl_character_sum,
    kronecker_to_c2,
    transform_primitive_check,
    verify_lemma62_route,
)
from .hallcore import primitive_subspace
from .partitions import parse_partition
from .repengine import (
    cyclic_quiver,
    a2_quiver,
    get_brute_engine,
    get_nilpotent_engine,
    hall_polynomial,
    is_regular_kronecker,
    kronecker_quiver,
    multisegment_str,
    parse_multisegment,
)
from .report import InternalCheckError
from .suite import CHECK_RUNNERS, run_all

CACHE_VERSION = f"hallalg-{__version__}-cache-1"


class UsageError(ValueError):
    pass


# ---------------------------------------------------------------------------
# Quiver selectors and argument parsing helpers
# ---------------------------------------------------------------------------

def _parse_selector(text: str):
    """Selector: c1 | cr:<r> | k2 | a2 | c2full."""
    text = text.strip().lower()
    if text == "c1":
        return ("nil", 1)
    if text.startswith("cr:"):
        try:
            r = int(text.split(":", 1)[1])
        except ValueError:
            raise UsageError(f"bad cyclic rank in selector {text!r}")
        if r < 1:
            raise UsageError("cyclic rank must be >= 1")
        return ("nil", r)
    if text == "k2":
        return ("brute", kronecker_quiver())
    if text == "a2":
        return ("brute", a2_quiver())
    if text == "c2full":
        return ("brute", cyclic_quiver(2))
    raise UsageError(f"unknown quiver selector {text!r}")


def _parse_dimvec(text: str, nv: int):
    parts = text.replace("(", "").replace(")", "").split(",")
    try:
        d = tuple(int(x) for x in parts)
    except ValueError:
        raise UsageError(f"bad dimension vector {text!r}")
    if len(d) != nv or any(x < 0 for x in d):
        raise UsageError(f"dimension vector {text!r} does not fit the quiver")
    return d


def _parse_cyclic_class(text: str, r: int):
    """Partition form '(2,1)' (Jordan quiver) or multisegment 'S1[2]+S2[1]'."""
    text = text.strip()
    if text.startswith("(") or (text and text[0].isdigit() and "[" not in text):
        if r != 1:
            raise UsageError("partition class syntax is only valid for c1")
        lam = parse_partition(text)
        return tuple(((0, part), mult) for part, mult in lam.exponential().items())
    return parse_multisegment(text, r)


def _get_engine(selector, q0):
    kind, payload = selector
    if kind == "nil":
        return get_nilpotent_engine(payload, q0)
    return get_brute_engine(payload, q0)


# ---------------------------------------------------------------------------
# Disk cache (brute-force and cyclic grade data: class tables, Hall numbers)
# ---------------------------------------------------------------------------

def _cache_path(cache_dir, tag, q0, d):
    name = f"{tag}_q{q0}_d{'-'.join(str(x) for x in d)}.json"
    return os.path.join(cache_dir, name)


def _load_cache(path):
    try:
        with open(path, "r", encoding="utf-8") as fh:
            data = json.load(fh)
        if data.get("version") != CACHE_VERSION:
            return None
        if "classes" not in data or "hall" not in data:
            return None
        return data
    except (OSError, ValueError):
        return None


def _store_cache(path, data):
    os.makedirs(os.path.dirname(path) or ".", exist_ok=True)
    tmp = path + ".tmp"
    with open(tmp, "w", encoding="utf-8") as fh:
        json.dump(data, fh, sort_keys=True)
    os.replace(tmp, path)


def _selector_tag(selector):
    kind, payload = selector
    return f"c{payload}nil" if kind == "nil" else payload.name.lower()


def _compute_class_rows(engine, d):
    rows = []
    for cls in engine.classes(d):
        row = {"class": cls.render(), "aut": engine.aut_order(cls)}
        if hasattr(engine, "orbit_size"):
            row["orbit_size"] = engine.orbit_size(cls)
            mats, _ = engine.rep_point(cls)
            row["rep"] = [[list(r) for r in m] for m in mats]
        rows.append(row)
    return rows


def _grade_cache(selector, q0, d, cache_dir):
    """Load or rebuild the cached (classes, hall) payload for one grade."""
    tag = _selector_tag(selector)
    path = _cache_path(cache_dir, tag, q0, d) if cache_dir else None
    if path:
        data = _load_cache(path)
        if data is not None:
            return data, path
    engine = _get_engine(selector, q0)
    data = {
        "version": CACHE_VERSION,
        "quiver": tag,
        "q": q0,
        "grade": list(d),
        "classes": _compute_class_rows(engine, d),
        "hall": {},
    }
    if path:
        _store_cache(path, data)
    return data, path


# ---------------------------------------------------------------------------
# Output formatting
# ---------------------------------------------------------------------------

def _emit_rows(rows, columns, fmt, out):
    if fmt == "json":
        out.write(json.dumps(rows, sort_keys=True) + "\n")
        return
    widths = [max(len(col), *(len(str(r.get(col, ""))) for r in rows)) if rows
              else len(col) for col in columns]
    header = "  ".join(col.ljust(w) for col, w in zip(columns, widths))
    out.write(header.rstrip() + "\n")
    for r in rows:
        line = "  ".join(str(r.get(col, "")).ljust(w)
                         for col, w in zip(columns, widths))
        out.write(line.rstrip() + "\n")


def _emit_report(rep, fmt, out):
    if fmt == "json":
        out.write(rep.to_json() + "\n")
    else:
        status = rep.status.upper()
        out.write(f"{rep.check:14s} {status:4s} {json.dumps(rep.params, sort_keys=True)}"
                  f" lhs={rep.lhs} rhs={rep.rhs}"
                  + (f" detail={rep.detail}" if rep.detail else "") + "\n")


# ---------------------------------------------------------------------------
# Commands
# ---------------------------------------------------------------------------

def cmd_isoclasses(args, out):
    selector = _parse_selector(args.quiver)
    nv = selector[1] if selector[0] == "nil" else selector[1].nv
    d = _parse_dimvec(args.d, nv)
    data, _ = _grade_cache(selector, args.q, d, args.cache_dir)
    rows = [{k: v for k, v in row.items() if k != "rep"} for row in data["classes"]]
    _emit_rows(rows, ["class", "aut"] + (["orbit_size"] if selector[0] == "brute" else []),
               args.format, out)
    return 0


def cmd_hallnum(args, out):
    selector = _parse_selector(args.quiver)
    if selector[0] != "nil":
        raise UsageError("hallnum expects a cyclic nilpotent quiver (c1 or cr:<r>)")
    r = selector[1]
    L = _parse_cyclic_class(args.L, r)
    M = _parse_cyclic_class(args.M, r)
    N = _parse_cyclic_class(args.N, r)
    if getattr(args, "symbolic", False):
        poly = hall_polynomial(r, L, M, N)
        out.write(poly.render() + "\n" if args.format != "json" else
                  json.dumps({"polynomial": poly.render()}, sort_keys=True) + "\n")
        return 0
    from .repengine import ms_dim_vector
    d = ms_dim_vector(L, r)
    key = f"{multisegment_str(L)}|{multisegment_str(M)}|{multisegment_str(N)}"
    data, path = _grade_cache(selector, args.q, d, args.cache_dir)
    if key in data["hall"]:
        value = data["hall"][key]
    else:
        engine = _get_engine(selector, args.q)
        value = engine.hall_number(engine.class_from_key(L), engine.class_from_key(M),
                                   engine.class_from_key(N))
        data["hall"][key] = value
        if path:
            _store_cache(path, data)
    if args.format == "json":
        out.write(json.dumps({"L": multisegment_str(L), "M": multisegment_str(M),
                              "N": multisegment_str(N), "q": args.q,
                              "value": value}, sort_keys=True) + "\n")
    else:
        out.write(f"{value}\n")
    return 0


def cmd_hallpoly(args, out):
    selector = _parse_selector(args.quiver)
    if selector[0] != "nil":
        raise UsageError("hallpoly expects a cyclic nilpotent quiver (c1 or cr:<r>)")
    r = selector[1]
    L = _parse_cyclic_class(args.L, r)
    M = _parse_cyclic_class(args.M, r)
    N = _parse_cyclic_class(args.N, r)
    poly = hall_polynomial(r, L, M, N)
    if args.format == "json":
        out.write(json.dumps({"L": multisegment_str(L), "M": multisegment_str(M),
                              "N": multisegment_str(N),
                              "polynomial": poly.render()}, sort_keys=True) + "\n")
    else:
        out.write(poly.render() + "\n")
    return 0


def cmd_primitive(args, out):
    selector = _parse_selector(args.quiver)
    nv = selector[1] if selector[0] == "nil" else selector[1].nv
    d = _parse_dimvec(args.d, nv)
    engine = _get_engine(selector, args.q)
    predicate = None
    if args.reg:
        if selector[0] != "brute" or selector[1] != kronecker_quiver():
            raise UsageError("--reg is only meaningful for the k2 quiver")
        predicate = lambda c: is_regular_kronecker(engine, c)
    basis = primitive_subspace(engine, d, predicate=predicate)
    rows = [e.to_json_dict() for e in basis]
    if args.format == "json":
        out.write(json.dumps({"dim": len(basis), "basis": rows}) + "\n")
    else:
        out.write(f"dimension {len(basis)}\n")
        for e in basis:
            out.write(e.render() + "\n")
    return 0


def cmd_element(args, out):
    """Construct one named primitive element and print it."""
    from .primitives import (
        PrimitiveSpec, c_central, kron_p0, kron_pinf, kron_pK2,
        kronecker_tubes, p_cyclic, p_jordan, p_jordan_symbolic,
        tube_primitive, x_element,
    )
    family = args.family
    n = args.n or 1
    if family == "jordan_pn":
        if args.symbolic:
            spec = PrimitiveSpec(family, n=n)
            rows = [{"class": f"I{list(lam.parts)}", "coeff": poly.render()}
                    for lam, poly in p_jordan_symbolic(n)]
            out.write(json.dumps({"family": spec.family, "n": n, "terms": rows},
                                 sort_keys=True) + "\n")
            return 0
        elt = p_jordan(get_nilpotent_engine(1, args.q), n)
    elif family in ("cyclic_cn", "cyclic_xn", "cyclic_pnr"):
        r = args.r or 2
        PrimitiveSpec(family, r=r, n=n, q0=args.q)
        engine = get_nilpotent_engine(r, args.q)
        builder = {"cyclic_cn": c_central, "cyclic_xn": x_element,
                   "cyclic_pnr": p_cyclic}[family]
        elt = builder(engine, n)
    elif family in ("kron_p0", "kron_pinf", "kron_pk2"):
        engine = get_brute_engine(kronecker_quiver(), args.q)
        builder = {"kron_p0": kron_p0, "kron_pinf": kron_pinf,
                   "kron_pk2": kron_pK2}[family]
        elt = builder(engine, n)
    elif family == "tube_pm":
        m = args.m or 1
        engine = get_brute_engine(kronecker_quiver(), args.q)
        tubes = kronecker_tubes(engine, m * (args.deg or 1))
        tubes = [t for t in tubes if t.degree == (args.deg or 1)]
        if not tubes or not 0 <= args.index < len(tubes):
            raise UsageError("no tube with that degree and index")
        elt = tube_primitive(engine, tubes[args.index], m)
    else:
        raise UsageError(f"unknown element family {family!r}")
    if args.format == "json":
        out.write(json.dumps(elt.to_json_dict()) + "\n")
    else:
        out.write(elt.render() + "\n")
    return 0


def cmd_verify(args, out):
    fmt = args.format
    if args.all:
        results = run_all(jobs=args.jobs)
        failed = 0
        for num, name, rep in results:
            if fmt == "json":
                out.write(json.dumps({"criterion": num, **rep.to_dict()},
                                     sort_keys=True) + "\n")
            else:
                out.write(f"criterion {num:2d} [{name}]: "
                          f"{'PASS' if rep.passed else 'FAIL'} ({rep.elapsed_ms} ms)"
                          + (f" {rep.detail}" if rep.detail else "") + "\n")
            if not rep.passed:
                failed += 1
        return 1 if failed else 0
    if not args.check:
        raise UsageError("verify needs a check name or --all")
    runner = CHECK_RUNNERS.get(args.check)
    if runner is None:
        known = ", ".join(sorted(CHECK_RUNNERS))
        raise UsageError(f"unknown check {args.check!r}; known checks: {known}")
    rep = runner({"n": args.n, "r": args.r, "q": args.q})
    _emit_report(rep, fmt, out)
    return 0 if rep.passed else 1


def cmd_fourier(args, out):
    check = args.check
    q = args.q
    if check == "a2":
        rep = a2_image_check(q)
    elif check == "hom":
        pairs = [((a, b), (c, d)) for a in (0, 1) for b in (0, 1)
                 for c in (0, 1) for d in (0, 1)]
        spec = kronecker_to_c2() if args.pair == "k2c2" else a2_reversal()
        rep = check_homomorphism(spec, q, pairs)
    elif check == "glsum":
        n = args.n or 1
        value = gl_character_sum(n, q)
        out.write(json.dumps({"n": n, "q": q, "value": value.render()}) + "\n")
        return 0
    elif check == "divided":
        rep = divided_power_check(args.n or 2, q)
    elif check == "lemma":
        rep = verify_lemma62_route(args.n or 1, q)
    elif check == "double":
        rep = double_transform_check(q)
    elif check == "prim":
        rep = transform_primitive_check(q)
    else:
        raise UsageError(f"unknown fourier check {check!r}")
    _emit_report(rep, args.format, out)
    return 0 if rep.passed else 1


# ---------------------------------------------------------------------------
# Entry point
# ---------------------------------------------------------------------------

def build_parser():
    p = argparse.ArgumentParser(
        prog="hallalg",
        description="Exact Hall-algebra computations for cyclic and Kronecker "
                    "quivers over finite fields")
    p.add_argument("--version", action="version", version=__version__)
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp, quiver=True):
        if quiver:
            sp.add_argument("--quiver", default="c1",
                            help="c1 | cr:<r> | k2 | a2 | c2full")
        sp.add_argument("--q", type=int, default=2, help="prime power field size")
        sp.add_argument("--cache-dir", default=None)
        sp.add_argument("--format", choices=("table", "json"), default="table")
        sp.add_argument("--jobs", type=int, default=1)

    sp = sub.add_parser("isoclasses", help="list isoclasses at a dimension vector")
    common(sp)
    sp.add_argument("--d", required=True, help="dimension vector, e.g. 1,1")
    sp.set_defaults(fn=cmd_isoclasses)

    sp = sub.add_parser("hallnum", help="one exact Hall number")
    common(sp)
    sp.add_argument("--L", required=True)
    sp.add_argument("--M", required=True)
    sp.add_argument("--N", required=True)
    sp.add_argument("--symbolic", action="store_true",
                    help="interpolate the Hall polynomial instead")
    sp.set_defaults(fn=cmd_hallnum)

    sp = sub.add_parser("hallpoly", help="Hall polynomial by interpolation")
    common(sp)
    sp.add_argument("--L", required=True)
    sp.add_argument("--M", required=True)
    sp.add_argument("--N", required=True)
    sp.set_defaults(fn=cmd_hallpoly)

    sp = sub.add_parser("primitive", help="basis of the primitive subspace")
    common(sp)
    sp.add_argument("--d", required=True)
    sp.add_argument("--reg", action="store_true",
                    help="restrict to regular classes (k2 only)")
    sp.set_defaults(fn=cmd_primitive)

    sp = sub.add_parser("element", help="construct one named primitive element")
    sp.add_argument("--family", required=True,
                    choices=("jordan_pn", "cyclic_cn", "cyclic_xn", "cyclic_pnr",
                             "tube_pm", "kron_p0", "kron_pinf", "kron_pk2"))
    sp.add_argument("--q", type=int, default=2)
    sp.add_argument("--r", type=int, default=None)
    sp.add_argument("--n", type=int, default=None)
    sp.add_argument("--m", type=int, default=None)
    sp.add_argument("--deg", type=int, default=1)
    sp.add_argument("--index", type=int, default=0)
    sp.add_argument("--symbolic", action="store_true")
    sp.add_argument("--format", choices=("table", "json"), default="table")
    sp.set_defaults(fn=cmd_element)

    sp = sub.add_parser("verify", help="run verification checks")
    sp.add_argument("check", nargs="?", default=None)
    sp.add_argument("--all", action="store_true", help="run the full suite")
    sp.add_argument("--n", type=int, default=None)
    sp.add_argument("--r", type=int, default=None)
    sp.add_argument("--q", type=int, default=None)
    sp.add_argument("--format", choices=("table", "json"), default="table")
    sp.add_argument("--jobs", type=int, default=1)
    sp.set_defaults(fn=cmd_verify)

    sp = sub.add_parser("fourier", help="Fourier-transform checks")
    sp.add_argument("--check", default="a2",
                    choices=("a2", "hom", "glsum", "divided", "lemma", "double", "prim"))
    sp.add_argument("--pair", default="k2c2", choices=("a2", "k2c2"))
    sp.add_argument("--q", type=int, default=2)
    sp.add_argument("--n", type=int, default=None)
    sp.add_argument("--format", choices=("table", "json"), default="table")
    sp.set_defaults(fn=cmd_fourier)

    return p


def main(argv=None, out=None):
    out = out or sys.stdout
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.fn(args, out)
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return 2
    except InternalCheckError as exc:
        print(f"internal inconsistency: {exc}", file=sys.stderr)
        return 3
    except (ValueError, ZeroDivisionError, TypeError) as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())

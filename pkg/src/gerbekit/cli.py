"""Command-line front end.

    gerbekit validate [--type KIND] FILE
    gerbekit run PIPELINE [--prime P] [--degree Q] [--max-dim D]
                 [--budget N] [--cap N] [--out DIR] INPUTS...

Exit codes: 0 success, 1 invariant or construction failure, 2 parse
failure, 3 cap/budget exceeded.  All artifacts are canonical JSON in a
content-addressed output directory, so reruns are byte-identical.
"""

from __future__ import annotations

import argparse
import json
import sys
from typing import Optional

from .errors import LIMIT_ERRORS, GerbekitError, ParseError
from . import jsonio
from .jsonio import Workspace, load_file


PIPELINES = {}


def pipeline(name):
    def wrap(fn):
        PIPELINES[name] = fn
        return fn
    return wrap


def _expect(kind_got: str, kind_want: str, path):
    if kind_got != kind_want:
        raise ParseError(f"expected a {kind_want}", (str(path), kind_got))


def _load_span(path):
    kind, obj, data = load_file(path)
    _expect(kind, "span", path)
    return obj, data


def _rebind_span(data: dict, source=None, target=None):
    """Re-parse a span sharing ``source``/``target`` objects with another."""
    apex = jsonio.parse_two_groupoid(data["apex"])
    src = source if source is not None else jsonio.parse_two_groupoid(data["source"])
    tgt = target if target is not None else jsonio.parse_two_groupoid(data["target"])
    from .spans import Span

    left = jsonio._parse_two_morphism(data["left"], apex, src)
    right = jsonio._parse_two_morphism(data["right"], apex, tgt)
    return Span(apex, left, right)


@pipeline("ext2bundle")
def _run_ext2bundle(args, ws: Workspace):
    kind, ext, _ = load_file(args.inputs[0])
    _expect(kind, "extension", args.inputs[0])
    from .extensions import extension_to_bundle

    span = extension_to_bundle(ext, cap=args.cap)
    data = jsonio.emit_span(span)
    return {"construction": "extension-to-bundle", "outputs": {"span": ws.add("span", data)}}


@pipeline("bundle2ext")
def _run_bundle2ext(args, ws: Workspace):
    span, _ = _load_span(args.inputs[0])
    from .extensions import bundle_to_extension

    ext, to_base = bundle_to_extension(span)
    return {
        "construction": "bundle-to-extension",
        "outputs": {"extension": ws.add("extension", jsonio.emit_extension(ext))},
        "base_map_objects": [
            jsonio.canon_label(to_base.cod.objs[to_base.f0[o]])
            for o in range(to_base.dom.n_objs)
        ],
    }


@pipeline("roundtrip")
def _run_roundtrip(args, ws: Workspace):
    kind, ext, _ = load_file(args.inputs[0])
    _expect(kind, "extension", args.inputs[0])
    from .extensions import roundtrip_check

    back, (psi, f0, f_tg) = roundtrip_check(ext)
    return {
        "construction": "extension-bundle-extension round trip",
        "outputs": {"extension": ws.add("extension", jsonio.emit_extension(back))},
        "isomorphism": {
            "group": [jsonio.canon_label(back.g.labels[v]) for v in psi],
            "objects": [jsonio.canon_label(back.tg.objs[v]) for v in f0],
            "arrows": [jsonio.canon_label(back.tg.arrs[v]) for v in f_tg],
        },
    }


@pipeline("central")
def _run_central(args, ws: Workspace):
    kind, ext, _ = load_file(args.inputs[0])
    _expect(kind, "extension", args.inputs[0])
    from .extensions import is_central

    cd = is_central(ext)
    out = {"construction": "centrality check", "central": cd is not None}
    if cd is not None:
        out["section"] = [
            jsonio.canon_label(cd.tgq.arrs[cd.sigma.f1[b]])
            for b in range(ext.base.n_arrs)
        ]
    return out


@pipeline("reduce")
def _run_reduce(args, ws: Workspace):
    kind, ext, _ = load_file(args.inputs[0])
    _expect(kind, "extension", args.inputs[0])
    from .extensions import central_reduction, is_central
    from .errors import NotCentral

    cd = is_central(ext)
    if cd is None:
        raise NotCentral("extension admits no central section", None)
    reduced, span, comparison = central_reduction(ext, cd, budget=args.budget)
    return {
        "construction": "central reduction to the center-kernel bundle",
        "outputs": {
            "extension": ws.add("extension", jsonio.emit_extension(reduced)),
            "span": ws.add("span", jsonio.emit_span(span)),
        },
        "comparison": comparison,
    }


@pipeline("class")
def _run_class(args, ws: Workspace):
    kind, ext, _ = load_file(args.inputs[0])
    _expect(kind, "extension", args.inputs[0])
    from .cohomology import basis
    from .extensions import extension_class
    from .groups import all_characters
    from .nerve import nerve

    p = args.prime
    b = basis(nerve(ext.base_two_groupoid(), 3), p, 2)
    result = []
    for chi in all_characters(ext.g, p):
        cls = extension_class(ext, p, chi.val)
        coords = b.coords(cls.vector)
        result.append(
            {
                "character": list(chi.val),
                "coordinates": list(coords),
                "nonzero": any(v for v in coords),
            }
        )
    return {
        "construction": "section 2-cocycle class of a central extension",
        "prime": p,
        "degree": 2,
        "classes": result,
    }


@pipeline("nerve")
def _run_nerve(args, ws: Workspace):
    kind, obj, _ = load_file(args.inputs[0])
    from .nerve import nerve
    from .two_groupoids import as_two_groupoid

    if kind == "groupoid":
        t = as_two_groupoid(obj)
    elif kind == "two_groupoid":
        t = obj
    elif kind == "extension":
        t = obj.base_two_groupoid()
    else:
        raise ParseError("nerve expects a groupoid or 2-groupoid", kind)
    ds = nerve(t, args.max_dim)
    ds.validate()
    return {
        "construction": "geometric nerve with face maps",
        "sizes": [ds.size(q) for q in range(ds.dim + 1)],
        "face_identities": "pass",
    }


def _as_two_groupoid_input(kind, obj):
    from .two_groupoids import as_two_groupoid

    if kind == "groupoid":
        return as_two_groupoid(obj)
    if kind == "two_groupoid":
        return obj
    if kind == "extension":
        return obj.base_two_groupoid()
    raise ParseError("expected a groupoid, 2-groupoid, or extension", kind)


@pipeline("cohomology")
def _run_cohomology(args, ws: Workspace):
    kind, obj, _ = load_file(args.inputs[0])
    t = _as_two_groupoid_input(kind, obj)
    from .cohomology import cohomology
    from .nerve import nerve

    ds = nerve(t, args.max_dim)
    dim, classes = cohomology(ds, args.prime, args.degree)
    return {
        "construction": "nerve cohomology over a prime field",
        "degree": args.degree,
        "prime": args.prime,
        "dimension": dim,
        "basis": [
            sorted([i, v] for i, v in enumerate(c.vector) if v)
            for c in classes
        ],
    }


@pipeline("charmap")
def _run_charmap(args, ws: Workspace):
    span, _ = _load_span(args.inputs[0])
    from .cohomology import characteristic_map

    mat = characteristic_map(span, args.degree, args.prime, max_dim=args.max_dim)
    coo = sorted(
        (r, c, v) for r, row in enumerate(mat) for c, v in enumerate(row) if v
    )
    text = "".join(f"{r} {c} {v}\n" for r, c, v in coo)
    name = f"charmap-{jsonio.content_hash({'m': [list(r) for r in mat]})}.txt"
    (ws.root / name).write_text(text)
    return {
        "construction": "characteristic matrix of a 2-group bundle",
        "degree": args.degree,
        "prime": args.prime,
        "matrix": [list(r) for r in mat],
        "outputs": {"matrix_coo": name},
    }


@pipeline("cocycle2bundle")
def _run_cocycle2bundle(args, ws: Workspace):
    kind, coc, _ = load_file(args.inputs[0])
    _expect(kind, "cocycle", args.inputs[0])
    from .cocycles import NonAbCocycle, cocycle_to_bundle

    if not isinstance(coc, NonAbCocycle):
        raise ParseError("pipeline needs transition automorphisms", args.inputs[0])
    span = cocycle_to_bundle(coc, cap=args.cap)
    return {
        "construction": "bundle of a twisted transition cocycle",
        "outputs": {"span": ws.add("span", jsonio.emit_span(span))},
    }


@pipeline("cocycle2ext")
def _run_cocycle2ext(args, ws: Workspace):
    kind, coc, _ = load_file(args.inputs[0])
    _expect(kind, "cocycle", args.inputs[0])
    from .cocycles import AbCocycle, ab_cocycle_to_central_extension

    if not isinstance(coc, AbCocycle):
        raise ParseError("pipeline needs an abelian cocycle", args.inputs[0])
    ext = ab_cocycle_to_central_extension(coc)
    return {
        "construction": "central extension of the cover groupoid",
        "outputs": {"extension": ws.add("extension", jsonio.emit_extension(ext))},
    }


@pipeline("whitney")
def _run_whitney(args, ws: Workspace):
    span1, data1 = _load_span(args.inputs[0])
    _, data2 = _load_span(args.inputs[1])
    if jsonio.canonical_json(data1["source"]) != jsonio.canonical_json(data2["source"]):
        raise ParseError("spans have different bases", None)
    span2 = _rebind_span(data2, source=span1.left.cod)
    from .spans import whitney_sum

    total, _prod, _ = whitney_sum(span1, span2)
    return {
        "construction": "pointwise sum of two bundles over one base",
        "outputs": {"span": ws.add("span", jsonio.emit_span(total))},
    }


@pipeline("pullback")
def _run_pullback(args, ws: Workspace):
    span_f, data_f = _load_span(args.inputs[0])
    _, data_b = _load_span(args.inputs[1])
    if jsonio.canonical_json(data_f["target"]) != jsonio.canonical_json(data_b["source"]):
        raise ParseError("middle 2-groupoids differ", None)
    span_b = _rebind_span(data_b, source=span_f.right.cod)
    from .spans import pullback_bundle

    out = pullback_bundle(span_f, span_b)
    return {
        "construction": "pullback of a bundle along a generalized morphism",
        "outputs": {"span": ws.add("span", jsonio.emit_span(out))},
    }


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="gerbekit")
    sub = ap.add_subparsers(dest="command", required=True)

    v = sub.add_parser("validate", help="run the invariant scan for a JSON object")
    v.add_argument("--type", dest="kind", default=None, choices=sorted(jsonio.PARSERS))
    v.add_argument("path")

    r = sub.add_parser("run", help="run a named pipeline")
    r.add_argument("pipeline", choices=sorted(PIPELINES))
    r.add_argument("--prime", type=int, default=2)
    r.add_argument("--degree", type=int, default=2)
    r.add_argument("--max-dim", type=int, default=3, dest="max_dim")
    r.add_argument("--budget", type=int, default=None)
    r.add_argument("--cap", type=int, default=None)
    r.add_argument("--out", default="gerbekit-out")
    r.add_argument("inputs", nargs="+")
    return ap


def main(argv: Optional[list] = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        if args.command == "validate":
            kind, _obj, _data = load_file(args.path, args.kind)
            print(json.dumps({"kind": kind, "status": "valid"}))
            return 0
        ws = Workspace(args.out)
        report = PIPELINES[args.pipeline](args, ws)
        report["pipeline"] = args.pipeline
        report["inputs"] = [
            jsonio.content_hash(load_file(p)[2]) for p in args.inputs
        ]
        name = ws.write_report(report)
        print(json.dumps({"report": str(ws.root / name), **report}, sort_keys=True))
        return 0
    except ParseError as exc:
        print(f"parse error: {exc}", file=sys.stderr)
        return 2
    except LIMIT_ERRORS as exc:
        print(f"{type(exc).__name__}: {exc}", file=sys.stderr)
        return 3
    except GerbekitError as exc:
        print(f"{type(exc).__name__}: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())

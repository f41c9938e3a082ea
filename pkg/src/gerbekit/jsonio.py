"""JSON schemas, canonical serialization, and the content-addressed store.

Canonical form: sorted keys, compact separators, string labels, trailing
newline.  Emitting is deterministic, so identical objects hash identically
and parse(emit(x)) re-emits byte-for-byte.
"""

from __future__ import annotations

import hashlib
import json
from pathlib import Path
from typing import Optional

from .errors import ParseError
from .groups import FiniteGroup, make_group
from .groupoids import FiniteGroupoid, GroupBundle, GroupoidMorphism, make_groupoid
from .two_groupoids import CrossedModuleGpd, TwoGroupoid, TwoMorphism
from .extensions import GExtension
from .cocycles import AbCocycle, Cover, NonAbCocycle
from .spans import Span


def canon_label(x) -> str:
    if isinstance(x, str):
        return x
    if isinstance(x, (int, bool)):
        return str(int(x))
    if isinstance(x, (tuple, list)):
        return "(" + ",".join(canon_label(p) for p in x) + ")"
    return str(x)


def canonical_json(data) -> str:
    return json.dumps(data, sort_keys=True, separators=(",", ":")) + "\n"


def content_hash(data) -> str:
    return hashlib.sha256(canonical_json(data).encode()).hexdigest()[:12]


# -- groups -------------------------------------------------------------------------


def emit_group(g: FiniteGroup) -> dict:
    names = [canon_label(lab) for lab in g.labels]
    return {
        "elements": names,
        "table": [[names[g.mul(a, b)] for b in g.elements()] for a in g.elements()],
    }


def parse_group(data: dict) -> FiniteGroup:
    try:
        names = list(data["elements"])
        table = data["table"]
    except (KeyError, TypeError) as exc:
        raise ParseError("group needs 'elements' and 'table'", exc.args) from None
    return make_group(table, names)


# -- groupoids ----------------------------------------------------------------------


def emit_groupoid(g: FiniteGroupoid) -> dict:
    objs = [canon_label(o) for o in g.objs]
    arrs = [canon_label(a) for a in g.arrs]
    return {
        "objects": objs,
        "arrows": [
            {"id": arrs[a], "src": objs[g.src[a]], "tgt": objs[g.tgt[a]]}
            for a in range(g.n_arrs)
        ],
        "compose": sorted(
            [arrs[a], arrs[b], arrs[c]] for (a, b), c in g.comp.items()
        ),
        "identities": {objs[o]: arrs[g.idn[o]] for o in range(g.n_objs)},
    }


def parse_groupoid(data: dict) -> FiniteGroupoid:
    try:
        objs = list(data["objects"])
        arrows = [(a["id"], a["src"], a["tgt"]) for a in data["arrows"]]
        comp = [tuple(entry) for entry in data["compose"]]
        idn = dict(data["identities"])
    except (KeyError, TypeError) as exc:
        raise ParseError("malformed groupoid", exc.args) from None
    return make_groupoid(objs, arrows, comp, idn)


# -- 2-groupoids -----------------------------------------------------------------------


def emit_two_groupoid(t: TwoGroupoid) -> dict:
    out = emit_groupoid(t.g1)
    cells = [canon_label(c) for c in t.cells]
    arrs = [canon_label(a) for a in t.g1.arrs]
    out["two_arrows"] = [
        {"id": cells[x], "l": arrs[t.l[x]], "u": arrs[t.u[x]]}
        for x in range(t.n_cells)
    ]
    out["vcompose"] = sorted(
        [cells[b], cells[a], cells[c]] for (b, a), c in t.vm.items()
    )
    out["hcompose"] = sorted(
        [cells[a], cells[b], cells[c]] for (a, b), c in t.hm.items()
    )
    return out


def parse_two_groupoid(data: dict) -> TwoGroupoid:
    g1 = parse_groupoid(data)
    try:
        cells = [c["id"] for c in data["two_arrows"]]
        cell_pos = {c: i for i, c in enumerate(cells)}
        l = [g1.arr_index(c["l"]) for c in data["two_arrows"]]
        u = [g1.arr_index(c["u"]) for c in data["two_arrows"]]
        vm = {
            (cell_pos[b], cell_pos[a]): cell_pos[c] for b, a, c in data["vcompose"]
        }
        hm = {
            (cell_pos[a], cell_pos[b]): cell_pos[c] for a, b, c in data["hcompose"]
        }
    except (KeyError, TypeError) as exc:
        raise ParseError("malformed 2-groupoid", exc.args) from None
    # vertical identities are recovered as the vm-units over each arrow
    vid = []
    by_l: dict = {}
    by_u: dict = {}
    for x in range(len(cells)):
        by_l.setdefault(l[x], []).append(x)
        by_u.setdefault(u[x], []).append(x)
    for a in range(g1.n_arrs):
        unit = None
        for cand in by_l.get(a, []):
            if u[cand] != a:
                continue
            good = all(
                vm.get((cand, x)) == x for x in by_u.get(a, [])
            ) and all(vm.get((y, cand)) == y for y in by_l.get(a, []))
            if good:
                unit = cand
                break
        if unit is None:
            raise ParseError("missing vertical identity over an arrow", g1.arrs[a])
        vid.append(unit)
    return TwoGroupoid(g1, cells, l, u, vm, hm, vid)


# -- crossed modules ---------------------------------------------------------------------


def emit_crossed_module(cm: CrossedModuleGpd) -> dict:
    x_, g_ = cm.bundle, cm.gamma
    return {
        "X": emit_groupoid(x_),
        "Gamma": emit_groupoid(g_),
        "rho": {
            canon_label(x_.arrs[a]): canon_label(g_.arrs[cm.rho.f1[a]])
            for a in range(x_.n_arrs)
        },
        "action": sorted(
            [
                canon_label(x_.arrs[x]),
                canon_label(g_.arrs[g]),
                canon_label(x_.arrs[y]),
            ]
            for (x, g), y in cm.action.items()
        ),
    }


def parse_crossed_module(data: dict) -> CrossedModuleGpd:
    try:
        xg = parse_groupoid(data["X"])
        gamma = parse_groupoid(data["Gamma"])
        rho_raw = data["rho"]
        action_raw = data["action"]
    except (KeyError, TypeError) as exc:
        raise ParseError("malformed crossed module", exc.args) from None
    bundle = GroupBundle(
        xg.objs, xg.arrs, xg.src, xg.tgt, xg.comp, xg.idn, xg.inv
    )
    rho = GroupoidMorphism(
        bundle,
        gamma,
        [gamma.obj_index(o) for o in bundle.objs],
        [gamma.arr_index(rho_raw[canon_label(a)]) for a in bundle.arrs],
    )
    action = {
        (bundle.arr_index(x), gamma.arr_index(g)): bundle.arr_index(y)
        for x, g, y in action_raw
    }
    return CrossedModuleGpd(bundle, gamma, rho, action)


# -- extensions -----------------------------------------------------------------------------


def emit_extension(e: GExtension) -> dict:
    tg = e.tg
    return {
        "M": [canon_label(o) for o in tg.objs],
        "G": emit_group(e.g),
        "tilde": emit_groupoid(tg),
        "base": emit_groupoid(e.base),
        "i": sorted(
            [
                canon_label(tg.objs[m]),
                canon_label(e.g.labels[x]),
                canon_label(tg.arrs[e.i(m, x)]),
            ]
            for m in range(tg.n_objs)
            for x in e.g.elements()
        ),
        "phi": {
            canon_label(tg.arrs[a]): canon_label(e.base.arrs[e.phi[a]])
            for a in range(tg.n_arrs)
        },
    }


def parse_extension(data: dict) -> GExtension:
    try:
        g = parse_group(data["G"])
        tg = parse_groupoid(data["tilde"])
        base = parse_groupoid(data["base"])
        i_entries = data["i"]
        phi_raw = data["phi"]
    except (KeyError, TypeError) as exc:
        raise ParseError("malformed extension", exc.args) from None
    i_lookup = {(m, x): arrow for m, x, arrow in i_entries}
    names = [canon_label(lab) for lab in g.labels]
    i_table = [
        [
            tg.arr_index(i_lookup[(canon_label(tg.objs[m]), names[x])])
            for x in g.elements()
        ]
        for m in range(tg.n_objs)
    ]
    phi = [base.arr_index(phi_raw[canon_label(tg.arrs[a])]) for a in range(tg.n_arrs)]
    return GExtension(g, tg, base, i_table, phi)


# -- cocycles ---------------------------------------------------------------------------------


def emit_nonab_cocycle(c: NonAbCocycle) -> dict:
    names = [canon_label(lab) for lab in c.group.labels]
    return {
        "space": [canon_label(x) for x in c.cover.points],
        "cover": [[canon_label(x) for x in u] for u in c.cover.opens],
        "group": emit_group(c.group),
        "lambda": sorted(
            (
                {
                    "i": i,
                    "j": j,
                    "x": canon_label(x),
                    "aut": {names[a]: names[table[a]] for a in c.group.elements()},
                }
                for (i, j, x), table in c.lam.items()
            ),
            key=lambda d: (d["i"], d["j"], d["x"]),
        ),
        "g": sorted(
            (
                {"i": i, "j": j, "k": k, "x": canon_label(x), "value": names[v]}
                for (i, j, k, x), v in c.gval.items()
            ),
            key=lambda d: (d["i"], d["j"], d["k"], d["x"]),
        ),
    }


def emit_ab_cocycle(c: AbCocycle) -> dict:
    names = [canon_label(lab) for lab in c.group.labels]
    return {
        "space": [canon_label(x) for x in c.cover.points],
        "cover": [[canon_label(x) for x in u] for u in c.cover.opens],
        "group": emit_group(c.group),
        "g": sorted(
            (
                {"i": i, "j": j, "k": k, "x": canon_label(x), "value": names[v]}
                for (i, j, k, x), v in c.gval.items()
            ),
            key=lambda d: (d["i"], d["j"], d["k"], d["x"]),
        ),
    }


def parse_cocycle(data: dict):
    """Either kind of cocycle; non-abelian when 'lambda' is present."""
    try:
        points = list(data["space"])
        opens = [list(u) for u in data["cover"]]
        group = parse_group(data["group"])
        g_entries = data["g"]
    except (KeyError, TypeError) as exc:
        raise ParseError("malformed cocycle", exc.args) from None
    cover = Cover(points, opens)
    gval = {
        (d["i"], d["j"], d["k"], d["x"]): group.index_of(d["value"])
        for d in g_entries
    }
    if "lambda" not in data:
        return AbCocycle(cover, group, gval)
    lam = {}
    for d in data["lambda"]:
        table = tuple(
            group.index_of(d["aut"][canon_label(group.labels[a])])
            for a in group.elements()
        )
        lam[(d["i"], d["j"], d["x"])] = table
    return NonAbCocycle(cover, group, lam, gval)


# -- spans --------------------------------------------------------------------------------------


def _emit_two_morphism(f: TwoMorphism) -> dict:
    return {
        "f0": [canon_label(f.cod.g1.objs[f.f0[o]]) for o in range(f.dom.g1.n_objs)],
        "f1": [canon_label(f.cod.g1.arrs[f.f1[a]]) for a in range(f.dom.g1.n_arrs)],
        "f2": [canon_label(f.cod.cells[f.f2[x]]) for x in range(f.dom.n_cells)],
    }


def emit_span(s: Span) -> dict:
    return {
        "apex": emit_two_groupoid(s.apex),
        "source": emit_two_groupoid(s.left.cod),
        "target": emit_two_groupoid(s.right.cod),
        "left": _emit_two_morphism(s.left),
        "right": _emit_two_morphism(s.right),
    }


def _parse_two_morphism(data: dict, dom: TwoGroupoid, cod: TwoGroupoid) -> TwoMorphism:
    return TwoMorphism(
        dom,
        cod,
        [cod.g1.obj_index(o) for o in data["f0"]],
        [cod.g1.arr_index(a) for a in data["f1"]],
        [cod.cell_index(x) for x in data["f2"]],
    )


def parse_span(data: dict) -> Span:
    try:
        apex = parse_two_groupoid(data["apex"])
        source = parse_two_groupoid(data["source"])
        target = parse_two_groupoid(data["target"])
        left = _parse_two_morphism(data["left"], apex, source)
        right = _parse_two_morphism(data["right"], apex, target)
    except (KeyError, TypeError) as exc:
        raise ParseError("malformed span", exc.args) from None
    return Span(apex, left, right)


# -- kind detection and the store ------------------------------------------------------------------


def detect_kind(data: dict) -> str:
    if not isinstance(data, dict):
        raise ParseError("top-level JSON must be an object", type(data).__name__)
    if "apex" in data:
        return "span"
    if "tilde" in data:
        return "extension"
    if "lambda" in data:
        return "cocycle"
    if "cover" in data and "g" in data:
        return "cocycle"
    if "X" in data and "rho" in data:
        return "crossed_module"
    if "two_arrows" in data:
        return "two_groupoid"
    if "arrows" in data:
        return "groupoid"
    if "table" in data and "elements" in data:
        return "group"
    raise ParseError("unrecognized object shape", sorted(data))


PARSERS = {
    "group": parse_group,
    "groupoid": parse_groupoid,
    "two_groupoid": parse_two_groupoid,
    "crossed_module": parse_crossed_module,
    "extension": parse_extension,
    "cocycle": parse_cocycle,
    "span": parse_span,
}


def load_file(path, kind: Optional[str] = None):
    try:
        raw = Path(path).read_text()
    except OSError as exc:
        raise ParseError("cannot read file", str(exc)) from None
    try:
        data = json.loads(raw)
    except json.JSONDecodeError as exc:
        raise ParseError("invalid JSON", str(exc)) from None
    kind = kind or detect_kind(data)
    if kind not in PARSERS:
        raise ParseError("unknown object kind", kind)
    return kind, PARSERS[kind](data), data


class Workspace:
    """Append-only content-addressed store of canonical JSON files."""

    def __init__(self, root):
        self.root = Path(root)
        self.root.mkdir(parents=True, exist_ok=True)

    def add(self, kind: str, data: dict) -> str:
        h = content_hash(data)
        name = f"{kind}-{h}.json"
        path = self.root / name
        if not path.exists():
            path.write_text(canonical_json(data))
        return name

    def write_report(self, report: dict) -> str:
        path = self.root / "report.json"
        path.write_text(canonical_json(report))
        return "report.json"

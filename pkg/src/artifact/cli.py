"""``localerel``: run checks against a workspace file and print a report.

Exit codes: 0 every checked law holds, 1 invalid input, 2 a checked property is
false, 3 size cap exceeded, 4 internal invariant violated (an engine bug).
"""
from __future__ import annotations

import argparse
import shlex
import sys
from pathlib import Path

import numpy as np

from . import _kernels
from .config import size_cap
from .conic import (
    adjunction_laws,
    cones_of,
    induce_relation_generic,
    is_fixed_point,
    search_composition_conjecture,
    unit_inclusion,
)
from .errors import (
    InternalInvariantViolation,
    InvalidInput,
    LocaleError,
    SizeCapExceeded,
    SourceNotOpen,
    TargetNotOpen,
    UnknownName,
)
from .lattice_core import identity_map
from .locale_maps import LocaleMap
from .properties import (
    cone_properties,
    em_isomorphism_suite,
    induced_property_theorem,
    property_report,
)
from .relations import (
    as_relation,
    compose,
    diagonal,
    empty_relation,
    is_monotone,
    to_open_cone,
    top_relation,
)
from .report import Report, Table, render_report
from .sublocales import closed_sublocale, open_sublocale, sublocale_eq, sublocale_leq
from .workspace import load_workspace

EXIT_OK, EXIT_INVALID, EXIT_FALSE, EXIT_CAP, EXIT_INTERNAL = 0, 1, 2, 3, 4


def yn(flag):
    return "yes" if flag else "no"


# -- describing relations ---------------------------------------------------------

def describe(rel):
    """Short name for a relation: top, empty, diagonal, or its size."""
    rel = as_relation(rel)
    base = rel.base
    if sublocale_eq(rel.sub, top_relation(base).sub):
        return "top relation"
    if sublocale_eq(rel.sub, empty_relation(base).sub):
        return "empty relation"
    if sublocale_eq(rel.sub, diagonal(base).sub):
        return "diagonal"
    return f"sublocale with {len(rel.sub.fixed)} of {rel.square.frame.n} opens"


def shape(rel):
    """"open at u" / "closed at u" when the sublocale has that form, else None."""
    rel = as_relation(rel)
    amb = rel.square.frame
    t = rel.nucleus.table
    top_class = np.flatnonzero(t == t[amb.top])
    u = amb.meet_all(top_class)
    if sublocale_eq(open_sublocale(amb, u), rel.sub):
        return f"open at {amb.labels[u]}"
    c = int(t[amb.bot])
    if sublocale_eq(closed_sublocale(amb, c), rel.sub):
        return f"closed at {amb.labels[c]}"
    return None


def _open_cone_or_report(rel, report, name):
    try:
        return to_open_cone(rel)
    except (SourceNotOpen, TargetNotOpen) as exc:
        side = "source" if isinstance(exc, SourceNotOpen) else "target"
        report.fact("open cones", "no")
        report.fact(f"{side} not open at", " ; ".join(map(str, exc.witness or ())))
        report.exit_code = EXIT_FALSE
        return None


# -- tables -----------------------------------------------------------------------

def map_table(name, corner, dom, rows):
    """One row per map; rows are (row label, map table, codomain frame)."""
    return Table(name, corner, dom.labels,
                 [(lbl, [cod.labels[int(v)] for v in table]) for lbl, table, cod in rows])


def cone_tables(r):
    base = r.base
    orr = r.frame
    c = cones_of(r)
    inv = map_table("s⁻¹/t⁻¹", "x", base,
                    [("s⁻¹(x)", r.s_inv.table, orr), ("t⁻¹(x)", r.t_inv.table, orr)])
    shriek = map_table("s_!/t_!", "o", orr,
                       [("s_!(o)", r.s_shriek.table, base), ("t_!(o)", r.t_shriek.table, base)])
    cones = map_table("↑/↓", "x", base, [("↑x", r.up.table, base), ("↓x", r.dn.table, base)])
    return [inv, shriek, cones, ring_table(c)]


def ring_table(c):
    f = c.frame
    pairs = [(x, y) for x in range(f.n) for y in range(f.n) if x != f.bot and y != f.bot]
    cols = [f"({f.labels[x]},{f.labels[y]})" for x, y in pairs]
    rows = [("Ů(x,y)", [f.labels[int(c.uring[x, y])] for x, y in pairs]),
            ("D̊(x,y)", [f.labels[int(c.dring[x, y])] for x, y in pairs])]
    return Table("Ů/D̊", "(x,y)", cols, rows)


def cone_pair_table(c, name="↑/↓"):
    return map_table(name, "x", c.frame, [("↑x", c.up.table, c.frame), ("↓x", c.dn.table, c.frame)])


# -- commands ---------------------------------------------------------------------

def cmd_validate(ws):
    rep = Report(f"workspace {Path(ws.source).name}")
    for (kind, name), item in ws.items.items():
        v = item.value
        key = f"{kind} {name}"
        if kind == "frame":
            pts = "point" if v.points.m == 1 else "points"
            rep.fact(key, f"{v.n} elements, {v.points.m} {pts}")
        elif kind == "space":
            rep.fact(key, f"{v.m} point{'' if v.m == 1 else 's'}")
        elif kind == "map":
            rep.fact(key, f"{ws.frame_name(v.src)} -> {ws.frame_name(v.dst)}; "
                          f"open: {yn(v.is_open)}")
        elif kind == "cones":
            rep.fact(key, "valid conic frame")
        elif kind == "relation":
            parts = [describe(v)]
            s = shape(v)
            if s:
                parts.append(s)
            parts.append(f"open cones: {yn(v.source.is_open and v.target.is_open)}")
            rep.fact(key, "; ".join(parts))
    return rep


def cmd_cones(ws, name):
    rel = ws.get("relation", name)
    rep = Report(f"cones of {name}")
    r = _open_cone_or_report(rel, rep, name)
    if r is None:
        return rep
    rep.fact("coproduct size", str(r.square.frame.n))
    rep.fact("coproduct elements", ", ".join(r.square.frame.labels))
    rep.fact("O R size", str(r.frame.n))
    for t in cone_tables(r):
        rep.table(t)
    return rep


def cmd_induce(ws, name):
    c = ws.get("cones", name)
    rep = Report(f"relation induced by {name}")
    r = c.induced
    oracle = induce_relation_generic(c)
    if not sublocale_eq(oracle.sub, r.sub):
        raise InternalInvariantViolation("direct and generic induced relations disagree")
    rep.fact("R_↑↓", describe(r))
    rep.fact("isomorphic to diagonal", yn(sublocale_eq(r.sub, diagonal(c.frame).sub)))
    rep.fact("O R_↑↓ size", str(r.frame.n))
    back = cones_of(r)
    rep.fact("cones recovered", yn(back == c))
    rep.table(cone_pair_table(c))
    rep.table(ring_table(c))
    return rep


def cmd_fixed_point(ws, name):
    rel = ws.get("relation", name)
    rep = Report(f"fixed point check for {name}")
    r = _open_cone_or_report(rel, rep, name)
    if r is None:
        return rep
    induced = cones_of(r).induced
    unit = unit_inclusion(r)
    if is_fixed_point(r):
        rep.fact("fixed point", "yes")
    else:
        rep.fact("fixed point", f"no; R_↑↓ = {describe(induced)}")
        rep.exit_code = EXIT_FALSE
    rep.fact("unit inclusion dense", yn(unit.density.dense))
    return rep


def cmd_properties(ws, name):
    if ws.has("relation", name):
        rep = Report(f"properties of relation {name}")
        r = _open_cone_or_report(ws.get("relation", name), rep, name)
        if r is None:
            return rep
        pr = property_report(r)
        for k, v in pr.internal.items():
            rep.fact(k, yn(v))
        for k, v in pr.cone_level.items():
            rep.fact(f"cones {k}", yn(v))
        return rep
    if ws.has("cones", name):
        c = ws.get("cones", name)
        rep = Report(f"properties of cones {name}")
        for k, v in cone_properties(c).items():
            rep.fact(k, yn(v))
        thm = induced_property_theorem(c)
        for k in ("reflexive", "transitive", "symmetric"):
            rep.fact(f"R_↑↓ {k}", yn(thm[k]))
        rep.fact("R_↑↓ interpolative", f"{yn(thm['interpolative'])} ({thm['interpolative_status']})")
        return rep
    raise UnknownName(f"no relation or cones named {name!r}", witness=(name,))


def cmd_compose(ws, rname, qname):
    rep = Report(f"composite {rname}∘{qname}")
    r = _open_cone_or_report(ws.get("relation", rname), rep, rname)
    if r is None:
        return rep
    q = _open_cone_or_report(ws.get("relation", qname), rep, qname)
    if q is None:
        return rep
    rq = compose(r, q)
    rep.fact(f"{rname}∘{qname}", describe(rq))
    rep.fact("↑ of composite = ↑_Q∘↑_R", yn(np.array_equal(rq.up.table, q.up.table[r.up.table])))
    rep.fact("↓ of composite = ↓_R∘↓_Q", yn(np.array_equal(rq.dn.table, r.dn.table[q.dn.table])))
    rep.table(map_table("↑/↓", "x", rq.base,
                        [("↑x", rq.up.table, rq.base), ("↓x", rq.dn.table, rq.base)]))
    return rep


def cmd_adjunction_check(ws):
    rep = Report("adjunction laws")
    names = {}
    relations = []
    for name, rel in ws.of_kind("relation"):
        try:
            r = to_open_cone(rel)
        except (SourceNotOpen, TargetNotOpen):
            rep.fact(f"skipped relation {name}", "no open cones")
            continue
        names[id(r)] = f"relation {name}"
        relations.append((name, r))
    conics = []
    for name, c in ws.of_kind("cones"):
        names[id(c)] = f"cones {name}"
        conics.append(c)
    morphisms = []
    for i, (rn, r) in enumerate(relations):
        for qn, q in relations:
            if r.base.same_as(q.base) and sublocale_leq(r.sub, q.sub):
                f = LocaleMap(identity_map(r.base))
                names[id(f)] = f"id: {rn} -> {qn}"
                morphisms.append((f, r, q))
    for mname, f in ws.of_kind("map"):
        for rn, r in relations:
            for qn, q in relations:
                if r.base.same_as(f.src) and q.base.same_as(f.dst) and is_monotone(f, r, q):
                    g = LocaleMap(f.inv)
                    names[id(g)] = f"{mname}: {rn} -> {qn}"
                    morphisms.append((g, r, q))
    result = adjunction_laws([r for _, r in relations], conics, morphisms, names)
    rows = [(law, [subject, yn(ok)]) for law, subject, ok, _ in result.checks]
    rep.fact("checks", str(len(result.checks)))
    rep.fact("all hold", yn(result.ok))
    if rows:
        rep.table(Table("laws", "law", ["subject", "holds"], rows))
    if not result.ok:
        rep.exit_code = EXIT_FALSE
    return rep


def cmd_em_roundtrip(ws):
    rep = Report("Egli-Milner round trips")
    ok = True
    for name, frame in ws.of_kind("frame"):
        results = em_isomorphism_suite([frame])
        good = sum(1 for r in results if r["cones_roundtrip"] and r["order_roundtrip"])
        meets = sum(1 for r in results if r["respects_meets"])
        rep.fact(f"frame {name}", f"{len(results)} monadic conic structures, "
                                  f"{good} round trips hold, {meets} respect meets")
        ok = ok and good == len(results)
    if not ok:
        rep.exit_code = EXIT_FALSE
    return rep


def _cone_key(frame, key):
    up, dn = key
    show = lambda t: "(" + ",".join(frame.labels[int(v)] for v in t) + ")"  # noqa: E731
    return f"↑={show(up)} ↓={show(dn)}"


def cmd_search(ws):
    rep = Report("composition conjecture search (findings only)")
    for name, frame in ws.of_kind("frame"):
        f = search_composition_conjecture([frame])
        rep.fact(f"frame {name} pairs", str(f["pairs"]))
        rep.fact(f"frame {name} composite equals induced", str(f["equal"]))
        rep.fact(f"frame {name} composite strictly smaller", str(f["strict"]))
        rep.fact(f"frame {name} composite cones not conic", str(f["composite cones not conic"]))
        rep.fact(f"frame {name} composite of fixed points not fixed",
                 str(f["composite of fixed points not fixed"]))
        for k, (c, d) in enumerate(f["examples"]):
            rep.fact(f"frame {name} strict example {k + 1}",
                     f"c: {_cone_key(frame, c)}; c': {_cone_key(frame, d)}")
    return rep


COMMANDS = {
    "validate": (cmd_validate, 0),
    "cones": (cmd_cones, 1),
    "induce": (cmd_induce, 1),
    "fixed-point": (cmd_fixed_point, 1),
    "properties": (cmd_properties, 1),
    "compose": (cmd_compose, 2),
    "adjunction-check": (cmd_adjunction_check, 0),
    "em-roundtrip": (cmd_em_roundtrip, 0),
    "search-composition-conjecture": (cmd_search, 0),
}


def run_command(ws, cmd):
    """Run ``cmd`` (a string or argument list); the exit code is ``report.exit_code``."""
    args = shlex.split(cmd) if isinstance(cmd, str) else list(cmd)
    if not args:
        raise InvalidInput("no command given")
    name, rest = args[0], args[1:]
    if name not in COMMANDS:
        raise UnknownName(f"unknown command {name!r}", witness=(name,))
    fn, arity = COMMANDS[name]
    if len(rest) != arity:
        raise InvalidInput(f"{name} takes {arity} argument(s), got {len(rest)}")
    return fn(ws, *rest)


# -- entry point ------------------------------------------------------------------

class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise InvalidInput(message)


def build_parser():
    p = _Parser(prog="localerel", description="Localic relations and their cones on finite frames.")
    p.add_argument("command", help=", ".join(COMMANDS))
    p.add_argument("args", nargs="*")
    p.add_argument("-f", "--file", required=True,
                   help="workspace file, or the name of a bundled fixture")
    p.add_argument("--cap", type=int, default=None, help="size cap for enumerations")
    p.add_argument("--format", choices=("table", "structured"), default="table")
    p.add_argument("--backend", choices=("python", "compiled"), default=None,
                   help="kernel backend (default: compiled when built)")
    return p


def _fail(code, exc):
    print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
    return code


def main(argv=None):
    try:
        opts = build_parser().parse_args(argv)
    except InvalidInput as exc:
        return _fail(EXIT_INVALID, exc)
    backend = opts.backend or _kernels.active()
    if backend not in _kernels.available():
        return _fail(EXIT_INVALID, InvalidInput(f"backend {backend!r} is not built"))
    try:
        with size_cap(opts.cap), _kernels.use_backend(backend):
            ws = load_workspace(opts.file)
            report = run_command(ws, [opts.command, *opts.args])
    except SizeCapExceeded as exc:
        return _fail(EXIT_CAP, exc)
    except InvalidInput as exc:
        return _fail(EXIT_INVALID, exc)
    except InternalInvariantViolation as exc:
        return _fail(EXIT_INTERNAL, exc)
    except LocaleError as exc:
        return _fail(EXIT_FALSE, exc)
    sys.stdout.write(render_report(report, opts.format))
    return report.exit_code


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())

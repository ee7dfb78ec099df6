"""Line-oriented workspace files: frames, spaces, maps, cones and relations.

A statement starts at column 1; indented lines continue it.  ``#`` starts a
comment.  Example::

    frame S elements ⊥ a ⊤ order ⊥<a<⊤
    relation R on S := open a x ⊤ + ⊤ x a
    cones C on S
        up ⊥ := ⊥   up a := ⊤   up ⊤ := ⊤
        dn ⊥ := ⊥   dn a := ⊤   dn ⊤ := ⊤
"""
from __future__ import annotations

import re
from dataclasses import dataclass, field
from pathlib import Path

from .conic import ConicFrame
from .coproduct import square
from .errors import (
    InternalInvariantViolation,
    InvalidInput,
    LocaleError,
    ParseError,
    SizeCapExceeded,
    UnknownName,
    ValidationError,
)
from .lattice_core import MonotoneMap, PointPoset, build_frame
from .locale_maps import make_locale_map
from .relations import (
    as_relation,
    closed_relation,
    diagonal,
    empty_relation,
    from_spatial,
    kernel_pair,
    open_relation,
    opens,
    top_relation,
)

FIXTURE_DIR = Path(__file__).with_name("fixtures")
KINDS = ("frame", "space", "map", "cones", "relation")


@dataclass(frozen=True)
class Token:
    text: str
    line: int
    col: int


@dataclass(frozen=True)
class Item:
    kind: str
    name: str
    value: object
    source: str
    line: int


@dataclass
class Workspace:
    source: str = "<string>"
    items: dict = field(default_factory=dict)      # (kind, name) -> Item
    space_of: dict = field(default_factory=dict)   # frame name -> PointPoset

    def add(self, kind, name, value, line):
        key = (kind, name)
        if key in self.items:
            prev = self.items[key]
            raise ValidationError(f"{kind} {name}", f"already defined on line {prev.line}",
                                  line=line)
        self.items[key] = Item(kind, name, value, self.source, line)

    def get(self, kind, name):
        try:
            return self.items[(kind, name)].value
        except KeyError:
            raise UnknownName(f"no {kind} named {name!r}", witness=(kind, name)) from None

    def has(self, kind, name):
        return (kind, name) in self.items

    def names(self, kind):
        return [name for (k, name) in self.items if k == kind]

    def of_kind(self, kind):
        return [(name, item.value) for (k, name), item in self.items.items() if k == kind]

    def frame_name(self, frame):
        for name, f in self.of_kind("frame"):
            if f is frame:
                return name
        return None

    @property
    def frames(self):
        return dict(self.of_kind("frame"))

    @property
    def relations(self):
        return dict(self.of_kind("relation"))

    @property
    def cones(self):
        return dict(self.of_kind("cones"))

    @property
    def maps(self):
        return dict(self.of_kind("map"))

    @property
    def spaces(self):
        return dict(self.of_kind("space"))


# -- tokenizing --------------------------------------------------------------------

def _statements(text):
    current = None
    for lineno, raw in enumerate(text.splitlines(), start=1):
        body = raw.split("#", 1)[0]
        if not body.strip():
            continue
        toks = [Token(m.group(), lineno, m.start() + 1) for m in re.finditer(r"\S+", body)]
        if body[0].isspace():
            if current is None:
                raise ParseError("continuation line without a statement", lineno, toks[0].col)
            current.extend(toks)
        else:
            if current:
                yield current
            current = toks
    if current:
        yield current


class _Cursor:
    def __init__(self, toks):
        self.toks = toks
        self.i = 0

    def done(self):
        return self.i >= len(self.toks)

    def peek(self):
        return None if self.done() else self.toks[self.i]

    def next(self, what):
        if self.done():
            last = self.toks[-1]
            raise ParseError(f"expected {what} after {last.text!r}", last.line,
                             last.col + len(last.text))
        tok = self.toks[self.i]
        self.i += 1
        return tok

    def expect(self, word):
        tok = self.next(repr(word))
        if tok.text != word:
            raise ParseError(f"expected {word!r}, found {tok.text!r}", tok.line, tok.col)
        return tok

    def rest(self):
        out = self.toks[self.i:]
        self.i = len(self.toks)
        return out


def _split_arrow(toks, sep):
    """Re-tokenize glued forms such as ``e:=f`` or ``p<q<r``."""
    out = []
    for t in toks:
        if sep in t.text and t.text != sep:
            col = t.col
            parts = t.text.split(sep)
            for k, part in enumerate(parts):
                if part:
                    out.append(Token(part, t.line, col))
                col += len(part)
                if k < len(parts) - 1:
                    out.append(Token(sep, t.line, col))
                    col += len(sep)
        else:
            out.append(t)
    return out


# -- element resolution -------------------------------------------------------------

def _element(ws, frame_name, frame, tok):
    try:
        return frame.index(tok.text)
    except UnknownName:
        pass
    space = ws.space_of.get(frame_name)
    if space is not None:
        names = None
        if tok.text == "∅" or tok.text == "{}":
            names = []
        elif tok.text.startswith("{") and tok.text.endswith("}"):
            names = [s.strip() for s in tok.text[1:-1].split(",") if s.strip()]
        if names is not None:
            pos = {p: i for i, p in enumerate(space.labels)}
            bits = 0
            for p in names:
                if p not in pos:
                    raise ParseError(f"unknown point {p!r} of space {frame_name}",
                                     tok.line, tok.col)
                bits |= 1 << pos[p]
            if bits in frame.index_of_bits:
                return frame.index_of_bits[bits]
            raise ParseError(f"{tok.text} is not an open of {frame_name}", tok.line, tok.col)
    raise ParseError(f"unknown element {tok.text!r} of {frame_name}", tok.line, tok.col)


def _assignments(ws, frame_name, frame, cur, keyword, dom=None, dom_name=None):
    """Rows ``keyword e := f``; ``e`` lives in ``dom`` (default: frame)."""
    dom = dom if dom is not None else frame
    dom_name = dom_name or frame_name
    rows = {}
    while not cur.done() and cur.peek().text == keyword:
        cur.next(keyword)
        e = cur.next("element")
        cur.expect(":=")
        f = cur.next("element")
        ie = _element(ws, dom_name, dom, e)
        if ie in rows:
            raise ParseError(f"{keyword} {e.text} given twice", e.line, e.col)
        rows[ie] = _element(ws, frame_name, frame, f)
    return rows


def _table(rows, dom, what, name, line):
    missing = [dom.labels[i] for i in range(dom.n) if i not in rows]
    if missing:
        raise ValidationError(name, f"{what} table has no row for {missing[0]}",
                              witness=tuple(missing), line=line)
    return [rows[i] for i in range(dom.n)]


# -- statements ---------------------------------------------------------------------

def _order_pairs(cur):
    toks = _split_arrow(cur.rest(), "<")
    pairs = []
    chain = []
    for t in toks:
        if t.text == "<":
            if not chain or chain[-1] == "<":
                raise ParseError("'<' needs an element on its left", t.line, t.col)
            chain.append("<")
        else:
            if chain and chain[-1] == "<":
                pairs.append((chain[-2], t))
            chain.append(t)
    if chain and chain[-1] == "<":
        t = toks[-1]
        raise ParseError("'<' needs an element on its right", t.line, t.col)
    return pairs


def _declared(cur, stop):
    out = []
    while not cur.done() and cur.peek().text != stop:
        out.append(cur.next("name"))
    return out


def _wrap(kind, name, line, fn):
    try:
        return fn()
    except (ParseError, ValidationError, SizeCapExceeded, InternalInvariantViolation):
        raise
    except LocaleError as exc:
        raise ValidationError(f"{kind} {name}", f"{type(exc).__name__}: {exc}",
                              witness=exc.witness, line=line, cause=exc) from exc


def _parse_frame(ws, cur, head):
    name = cur.next("frame name")
    cur.expect("elements")
    elems = _declared(cur, "order")
    pairs = []
    if not cur.done():
        cur.expect("order")
        pairs = _order_pairs(cur)
    known = {e.text for e in elems}
    for a, b in pairs:
        for t in (a, b):
            if t.text not in known:
                raise ParseError(f"unknown element {t.text!r}", t.line, t.col)
    frame = _wrap("frame", name.text, head.line,
                  lambda: build_frame([e.text for e in elems],
                                      [(a.text, b.text) for a, b in pairs]))
    ws.add("frame", name.text, frame, head.line)


def _parse_space(ws, cur, head):
    name = cur.next("space name")
    cur.expect("points")
    pts = _declared(cur, "order")
    pairs = []
    if not cur.done():
        cur.expect("order")
        pairs = _order_pairs(cur)
    labels = [p.text for p in pts]
    for p in pts:
        if not re.fullmatch(r"[^\s{},()]+", p.text):
            raise ParseError(f"bad point name {p.text!r}", p.line, p.col)
    known = set(labels)
    for a, b in pairs:
        for t in (a, b):
            if t.text not in known:
                raise ParseError(f"unknown point {t.text!r}", t.line, t.col)

    def build():
        space = PointPoset.from_relations(labels, [(a.text, b.text) for a, b in pairs])
        return space, opens(space)

    space, frame = _wrap("space", name.text, head.line, build)
    ws.add("space", name.text, space, head.line)
    ws.add("frame", name.text, frame, head.line)
    ws.space_of[name.text] = space


def _parse_map(ws, cur, head):
    name = cur.next("map name")
    if name.text.endswith(":") and name.text != ":":
        name = Token(name.text[:-1], name.line, name.col)
    else:
        cur.expect(":")
    src_t = cur.next("source frame")
    cur.expect("->")
    dst_t = cur.next("target frame")
    src, dst = _frame_ref(ws, src_t), _frame_ref(ws, dst_t)
    rest = _Cursor(_split_arrow(cur.rest(), ":="))
    rows = _assignments(ws, src_t.text, src, rest, "preimage", dom=dst, dom_name=dst_t.text)
    _trailing(rest)
    table = _table(rows, dst, "preimage", f"map {name.text}", head.line)

    def build():
        return make_locale_map(MonotoneMap(dst, src, table))

    ws.add("map", name.text, _wrap("map", name.text, head.line, build), head.line)


def _parse_cones(ws, cur, head):
    name = cur.next("cones name")
    cur.expect("on")
    ft = cur.next("frame name")
    frame = _frame_ref(ws, ft)
    rest = _Cursor(_split_arrow(cur.rest(), ":="))
    up_rows, dn_rows = {}, {}
    while not rest.done():
        word = rest.peek().text
        if word == "up":
            got = _assignments(ws, ft.text, frame, rest, "up")
            _merge(up_rows, got, rest)
        elif word == "dn":
            got = _assignments(ws, ft.text, frame, rest, "dn")
            _merge(dn_rows, got, rest)
        else:
            t = rest.peek()
            raise ParseError(f"expected 'up' or 'dn', found {t.text!r}", t.line, t.col)
    label = f"cones {name.text}"
    up = _table(up_rows, frame, "up", label, head.line)
    dn = _table(dn_rows, frame, "dn", label, head.line)
    cones = _wrap("cones", name.text, head.line, lambda: ConicFrame(frame, up, dn))
    ws.add("cones", name.text, cones, head.line)


def _merge(into, rows, cur):
    for k, v in rows.items():
        if k in into:
            t = cur.toks[cur.i - 1]
            raise ParseError("row given twice", t.line, t.col)
        into[k] = v


def _trailing(cur):
    if not cur.done():
        t = cur.peek()
        raise ParseError(f"unexpected {t.text!r}", t.line, t.col)


def _frame_ref(ws, tok):
    if not ws.has("frame", tok.text):
        raise ParseError(f"unknown frame {tok.text!r}", tok.line, tok.col)
    return ws.get("frame", tok.text)


def _rectangles(ws, frame_name, frame, cur):
    sq = square(frame)
    bits = 0
    while True:
        x = _element(ws, frame_name, frame, cur.next("element"))
        cur.expect("x")
        y = _element(ws, frame_name, frame, cur.next("element"))
        bits |= sq.rect_bits(x, y)
        if cur.done():
            break
        cur.expect("+")
    return sq.frame.index_of_bits[bits]


_PAIR = re.compile(r"\(\s*([^\s,()]+)\s*,\s*([^\s,()]+)\s*\)")


def _parse_relation(ws, cur, head):
    name = cur.next("relation name")
    cur.expect("on")
    ft = cur.next("frame name")
    frame = _frame_ref(ws, ft)
    cur.expect(":=")
    kind = cur.next("relation kind")
    k = kind.text

    def ref(what):
        tok = cur.next(f"{what} name")
        if not ws.has(what, tok.text):
            raise ParseError(f"unknown {what} {tok.text!r}", tok.line, tok.col)
        return tok, ws.get(what, tok.text)

    if k in ("open", "closed"):
        u = _rectangles(ws, ft.text, frame, cur)
        build = (lambda: open_relation(frame, u)) if k == "open" \
            else (lambda: closed_relation(frame, u))
    elif k in ("diagonal", "top", "empty"):
        _trailing(cur)
        build = {"diagonal": lambda: diagonal(frame), "top": lambda: top_relation(frame),
                 "empty": lambda: empty_relation(frame)}[k]
    elif k == "kernel-pair":
        tok, q = ref("map")
        _trailing(cur)
        if not q.src.same_as(frame):
            raise ValidationError(f"relation {name.text}",
                                  f"map {tok.text} does not start at {ft.text}", line=head.line)
        build = lambda: kernel_pair(q)  # noqa: E731
    elif k == "induced":
        tok, c = ref("cones")
        _trailing(cur)
        if not c.frame.same_as(frame):
            raise ValidationError(f"relation {name.text}",
                                  f"cones {tok.text} live on another frame", line=head.line)
        build = lambda: as_relation(c.induced)  # noqa: E731
    elif k == "spatial":
        tok, space = ref("space")
        if ws.get("frame", tok.text) is not frame:
            raise ValidationError(f"relation {name.text}",
                                  f"space {tok.text} does not carry frame {ft.text}",
                                  line=head.line)
        cur.expect("pairs")
        rest = cur.rest()
        text = " ".join(t.text for t in rest)
        pairs = _PAIR.findall(text)
        leftover = _PAIR.sub("", text).strip()
        if leftover:
            t = rest[0] if rest else kind
            raise ParseError(f"cannot read pairs from {leftover!r}", t.line, t.col)
        known = set(space.labels)
        for p, q in pairs:
            for pt in (p, q):
                if pt not in known:
                    t = next((t for t in rest if pt in t.text), kind)
                    raise ParseError(f"unknown point {pt!r}", t.line, t.col)
        build = lambda: from_spatial(space, pairs)  # noqa: E731
    else:
        raise ParseError(f"unknown relation kind {k!r}", kind.line, kind.col)
    rel = _wrap("relation", name.text, head.line, build)
    ws.add("relation", name.text, rel, head.line)


_PARSERS = {
    "frame": _parse_frame,
    "space": _parse_space,
    "map": _parse_map,
    "cones": _parse_cones,
    "relation": _parse_relation,
}


def parse_workspace(text, source="<string>"):
    """Parse and validate a workspace; errors carry line and column."""
    ws = Workspace(source=source)
    for toks in _statements(text):
        head = toks[0]
        parser = _PARSERS.get(head.text)
        if parser is None:
            raise ParseError(f"unknown statement {head.text!r}", head.line, head.col)
        cur = _Cursor(toks[1:] if len(toks) > 1 else [])
        if cur.done():
            raise ParseError(f"{head.text} needs a name", head.line, head.col + len(head.text))
        parser(ws, cur, head)
        if not cur.done():
            _trailing(cur)
    return ws


def resolve_workspace_path(name):
    """A path on disk, or the name of a bundled fixture (with or without .loc)."""
    p = Path(name)
    if p.exists():
        return p
    for cand in (FIXTURE_DIR / name, FIXTURE_DIR / f"{name}.loc"):
        if cand.exists():
            return cand
    raise UnknownName(f"no workspace file or bundled fixture named {name!r}", witness=(name,))


def load_workspace(name):
    path = resolve_workspace_path(name)
    return parse_workspace(path.read_text(encoding="utf-8"), source=str(path))


def bundled_fixtures():
    return sorted(p.name for p in FIXTURE_DIR.glob("*.loc"))


__all__ = ["Workspace", "Item", "parse_workspace", "load_workspace", "resolve_workspace_path",
           "bundled_fixtures", "KINDS", "InvalidInput"]

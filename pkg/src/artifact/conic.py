"""Conic frames, the induced relation R_↑↓, conic morphisms and the adjunction checks."""
from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property

import numpy as np

from . import _kernels
from .config import check_cap
from .coproduct import square
from .errors import (
    BaseMismatch,
    BottomNotPreserved,
    FrameMismatch,
    HypothesisViolated,
    InternalInvariantViolation,
    JoinsNotPreserved,
    NotParallel,
)
from .lattice_core import FrameMap, MonotoneMap, identity_map, iter_bits
from .locale_maps import Density, LocaleMap, density
from .relations import (
    LocalicRelation,
    OpenConeRelation,
    is_monotone,
    product_inverse,
    to_open_cone,
)
from .sublocales import Nucleus, Sublocale, close_bits, closure_rules, saturate, sublocale_eq, \
    sublocale_leq


def _table(t):
    return np.asarray(getattr(t, "table", t), dtype=np.int64)


class ConePair:
    """Two self-maps of a frame, not yet validated."""

    def __init__(self, frame, up, dn):
        self.frame = frame
        up, dn = _table(up), _table(dn)
        if up.shape != (frame.n,) or dn.shape != (frame.n,):
            raise JoinsNotPreserved("cone tables need one entry per element")
        self.up = MonotoneMap(frame, frame, up, check=False)
        self.dn = MonotoneMap(frame, frame, dn, check=False)

    def key(self):
        return (tuple(self.up.table.tolist()), tuple(self.dn.table.tolist()))

    def __eq__(self, other):
        if not isinstance(other, ConePair):
            return NotImplemented
        return self.frame.same_as(other.frame) and self.key() == other.key()

    __hash__ = None

    def __repr__(self):
        return f"{type(self).__name__}(up={self.up.labelled()}, dn={self.dn.labelled()})"


def conic_violation(p):
    """The first failed conic-frame law as (error class, witness), or None."""
    f = p.frame
    for name, cone in (("up", p.up), ("dn", p.dn)):
        if cone(f.bot) != f.bot:
            return BottomNotPreserved, (name, f.labels[cone(f.bot)])
    for name, cone in (("up", p.up), ("dn", p.dn)):
        x, y = _kernels.preserve_violation(cone.table, f.join, f.join)
        if x >= 0:
            return JoinsNotPreserved, (name, f.labels[x], f.labels[y])
    x, y, law = _kernels.parallel_violation(p.up.table, p.dn.table, f.meet, f.leq_u8)
    if x >= 0:
        return NotParallel, (f.labels[x], f.labels[y], "up" if law == 0 else "dn")
    return None


class ConicFrame(ConePair):
    """A frame with join-preserving parallel cones."""

    def __init__(self, frame, up, dn, check=True):
        super().__init__(frame, up, dn)
        if check:
            bad = conic_violation(self)
            if bad is not None:
                err, witness = bad
                raise err(f"cones fail: {err.__name__}", witness=witness)

    @cached_property
    def dring(self):
        """D̊ table: dring[x, y] = x ∧ ↓y."""
        return self.frame.meet[:, self.dn.table]

    @cached_property
    def uring(self):
        """Ů table: uring[x, y] = ↑x ∧ y."""
        return self.frame.meet[self.up.table, :]

    def reduced(self, x, y):
        return int(self.dring[x, y]), int(self.uring[x, y])

    @cached_property
    def induced(self):
        return induce_relation(self)


def validate_conic(p):
    return ConicFrame(p.frame, p.up, p.dn)


def reduced(c, x, y):
    return c.reduced(x, y)


def sim_related(c, ab, xy):
    return c.reduced(*ab) == c.reduced(*xy)


def separating_open(c, z, side):
    """⋁{x⊗y : side(x,y) ⊑ z} as an element of the square; side is "U" or "D"."""
    sq = square(c.frame)
    tab = c.uring if side in ("U", "Ů", "up") else c.dring
    f = c.frame
    bits = 0
    for x in range(f.n):
        for y in range(f.n):
            if f.le(int(tab[x, y]), z):
                bits |= sq.rect_bits_table[x][y]
    return sq.frame.index_of_bits[bits]


def _reduction_pairs(c):
    sq = square(c.frame)
    rb = sq.rect_bits_table
    n = c.frame.n
    return [(rb[int(c.dring[x, y])][int(c.uring[x, y])], rb[x][y])
            for x in range(n) for y in range(n)]


def induce_relation(c):
    """R_↑↓: the square modulo x⊗y ∼ D̊(x,y)⊗Ů(x,y), with its open cones."""
    f = c.frame
    sq = square(f)
    amb = sq.frame
    rules = closure_rules(_reduction_pairs(c), [sq.product_points.all_bits], both_ways=False)
    closed = close_bits(amb.enc, rules, sq.width)
    sub = Sublocale(Nucleus(amb, [amb.index_of_bits[e] for e in closed]))
    rel = LocalicRelation(f, sub)
    nu = sub.nucleus.table
    for z in range(f.n):
        if nu[sq.rect(z, f.top)] != separating_open(c, z, "D") \
                or nu[sq.rect(f.top, z)] != separating_open(c, z, "U"):
            raise InternalInvariantViolation("source/target preimages are not the separating opens",
                                             witness=(f.labels[z],))
    out = to_open_cone(rel)
    s_sh, t_sh = _shrieks_by_formula(c, sub)
    if not (np.array_equal(s_sh, out.s_shriek.table) and np.array_equal(t_sh, out.t_shriek.table)):
        raise InternalInvariantViolation("shrieks disagree with the reduced-cone formula")
    if not (np.array_equal(out.up.table, c.up.table) and np.array_equal(out.dn.table, c.dn.table)):
        raise InternalInvariantViolation("induced relation does not recover its cones")
    return out


def _shrieks_by_formula(c, sub):
    """s_!(O) = ⋁{D̊(A,B) : μ(A⊗B) ⊑ O}, t_! likewise with Ů."""
    f = c.frame
    sq = square(f)
    amb = sub.ambient
    nu = sub.nucleus.table
    rt = sq.rect_table
    s_sh, t_sh = [], []
    for o in sub.fixed:
        s_acc = t_acc = 0
        for a in range(f.n):
            for b in range(f.n):
                if amb.le(int(nu[rt[a, b]]), o):
                    s_acc |= f.enc[int(c.dring[a, b])]
                    t_acc |= f.enc[int(c.uring[a, b])]
        s_sh.append(f.index_of_bits[s_acc])
        t_sh.append(f.index_of_bits[t_acc])
    return np.array(s_sh), np.array(t_sh)


def induce_relation_generic(c):
    """Oracle: full two-sided saturation over the point basis."""
    sq = square(c.frame)
    amb = sq.frame
    rt = sq.rect_table
    n = c.frame.n
    gens = [(int(rt[x, y]), int(rt[int(c.dring[x, y]), int(c.uring[x, y])]))
            for x in range(n) for y in range(n)]
    return LocalicRelation(c.frame, Sublocale(saturate(amb, gens)))


def cones_of(r):
    r = to_open_cone(r)
    return ConicFrame(r.base, r.up, r.dn, check=False)


def is_conic_morphism(h, c_src, c_dst):
    """h: L -> M with ↑'∘h ⊑ h∘↑ and ↓'∘h ⊑ h∘↓, cross-checked against ∼-preservation."""
    if not h.dom.same_as(c_src.frame) or not h.cod.same_as(c_dst.frame):
        raise FrameMismatch("h must run from the source conic frame to the target one")
    m = h.cod
    t = h.table
    pointwise = bool(m.leq[c_dst.up.table[t], t[c_src.up.table]].all()
                     and m.leq[c_dst.dn.table[t], t[c_src.dn.table]].all())
    n = h.dom.n
    preserves = True
    for x in range(n):
        for y in range(n):
            d, u = c_src.reduced(x, y)
            if c_dst.reduced(int(t[x]), int(t[y])) != c_dst.reduced(int(t[d]), int(t[u])):
                preserves = False
                break
        if not preserves:
            break
    if pointwise != preserves:
        raise InternalInvariantViolation("cone inequalities and ∼-preservation disagree")
    return pointwise


@dataclass(frozen=True)
class UnitInclusion:
    induced: OpenConeRelation
    inv: FrameMap
    density: Density


def unit_inclusion(r):
    """The inclusion R ⊆ R_↑↓ with its inverse-image map and density flags."""
    r = to_open_cone(r)
    induced = cones_of(r).induced
    if not sublocale_leq(r.sub, induced.sub):
        raise InternalInvariantViolation("relation is not contained in its induced relation")
    inv_table = r.rel.r_inv.table[np.array(induced.sub.fixed, dtype=np.int64)]
    inv = FrameMap(induced.frame, r.frame, inv_table, check=False)
    if not np.array_equal(inv.table[induced.rel.r_inv.table], r.rel.r_inv.table):
        raise InternalInvariantViolation("inclusion does not factor the quotient map")
    return UnitInclusion(induced, inv, density(LocaleMap(inv)))


def is_fixed_point(r):
    r = to_open_cone(r)
    return sublocale_eq(r.sub, cones_of(r).induced.sub)


def universality_check(r, c):
    """R ⊆ R_c exactly when ↑_R ⊑ ↑_c and ↓_R ⊑ ↓_c; both sides computed."""
    r = to_open_cone(r)
    if not r.base.same_as(c.frame):
        raise BaseMismatch("relation and cones live on different frames")
    lhs = bool(sublocale_leq(r.sub, c.induced.sub))
    leq = c.frame.leq
    rhs = bool(leq[r.up.table, c.up.table].all() and leq[r.dn.table, c.dn.table].all())
    if lhs != rhs:
        raise InternalInvariantViolation("inclusion and cone comparison disagree",
                                         witness=(lhs, rhs))
    return lhs


# -- adjunction report --------------------------------------------------------------

@dataclass
class AdjunctionReport:
    checks: list = field(default_factory=list)

    def add(self, law, subject, ok, witness=None):
        self.checks.append((law, subject, bool(ok), witness))

    @property
    def ok(self):
        return all(c[2] for c in self.checks)

    def failures(self):
        return [c for c in self.checks if not c[2]]


def adjunction_laws(relations=(), conics=(), morphisms=(), names=None):
    """Counit identity, unit monotonicity, triangle identities and functoriality.

    ``morphisms`` holds triples (f, R, Q) with f: (X, R) -> (Y, Q) monotone.
    """
    report = AdjunctionReport()
    names = names or {}
    for i, c in enumerate(conics):
        label = names.get(id(c), f"cones#{i}")
        try:
            induced = c.induced
            ok = (np.array_equal(induced.up.table, c.up.table)
                  and np.array_equal(induced.dn.table, c.dn.table))
        except InternalInvariantViolation as exc:
            ok, induced = False, None
            report.add("counit", label, False, str(exc))
            continue
        report.add("counit", label, ok)
        again = cones_of(induced).induced
        report.add("triangle (Rel)", label, sublocale_eq(again.sub, induced.sub))
    for i, r in enumerate(relations):
        label = names.get(id(r), f"relation#{i}")
        r = to_open_cone(r)
        c = cones_of(r)
        induced = c.induced
        ident = LocaleMap(identity_map(r.base))
        report.add("unit monotone", label, is_monotone(ident, r, induced))
        report.add("unit inclusion", label, sublocale_leq(r.sub, induced.sub))
        back = cones_of(induced)
        report.add("triangle (Cone)", label, back == c)
        report.add("universality", label, universality_check(r, c))
    for i, (f, r, q) in enumerate(morphisms):
        label = names.get(id(f), f"map#{i}")
        r, q = to_open_cone(r), to_open_cone(q)
        report.add("monotone", label, is_monotone(f, r, q))
        cr, cq = cones_of(r), cones_of(q)
        report.add("functor Cone", label, is_conic_morphism(f.inv, cq, cr))
        ri, qi = cr.induced, cq.induced
        h = FrameMap(q.square.frame, ri.frame,
                     ri.rel.r_inv.table[product_inverse(f).table], check=False)
        try:
            fbar = qi.sub.factor(h)
            ok = np.array_equal(fbar.table[qi.rel.r_inv.table], h.table)
        except HypothesisViolated:
            ok = False
        report.add("functor Rel", label, ok)
    return report


# -- enumeration ---------------------------------------------------------------------

def canonical_cones(frame, kind):
    if kind == "identity":
        t = np.arange(frame.n)
        return ConicFrame(frame, t, t)
    if kind == "bottom":
        t = np.full(frame.n, frame.bot)
        return ConicFrame(frame, t, t)
    if kind == "codiscrete":
        t = np.where(np.arange(frame.n) == frame.bot, frame.bot, frame.top)
        return ConicFrame(frame, t, t)
    raise ValueError(f"unknown cone kind {kind!r}")


def enumerate_join_preserving(frame):
    """All join-preserving self-maps, from monotone choices on the points."""
    pts = frame.points
    order = sorted(range(pts.m), key=lambda p: bin(pts.down[p]).count("1"))
    below = {p: [q for q in range(pts.m) if q != p and pts.leq[q, p]] for p in range(pts.m)}
    out = []

    def extend(i, choice):
        if i == len(order):
            table = []
            for e in frame.enc:
                acc = 0
                for p in iter_bits(e):
                    acc |= frame.enc[choice[p]]
                table.append(frame.index_of_bits[acc])
            out.append(np.array(table, dtype=np.int64))
            check_cap(len(out), "join-preserving maps")
            return
        p = order[i]
        floor = 0
        for q in below[p]:
            floor |= frame.enc[choice[q]]
        for v in range(frame.n):
            if floor & ~frame.enc[v] == 0:
                choice[p] = v
                extend(i + 1, choice)
        choice.pop(p, None)

    extend(0, {})
    return out


def enumerate_conic_structures(frame):
    maps = enumerate_join_preserving(frame)
    out = []
    for up in maps:
        for dn in maps:
            c = ConePair(frame, up, dn)
            if conic_violation(c) is None:
                out.append(ConicFrame(frame, up, dn, check=False))
    return out


def search_composition_conjecture(frames):
    """Compare R_c ∘ R_c' with R_{↑'∘↑, ↓∘↓'} over all conic structures; findings only."""
    from .relations import compose

    findings = {"pairs": 0, "equal": 0, "strict": 0, "composite cones not conic": 0,
                "composite of fixed points not fixed": 0, "examples": []}
    for frame in frames:
        structures = enumerate_conic_structures(frame)
        for c in structures:
            for d in structures:
                findings["pairs"] += 1
                up = d.up.table[c.up.table]
                dn = c.dn.table[d.dn.table]
                comp = compose(c.induced, d.induced)
                if is_fixed_point(comp) is False:
                    findings["composite of fixed points not fixed"] += 1
                pair = ConePair(frame, up, dn)
                if conic_violation(pair) is not None:
                    findings["composite cones not conic"] += 1
                    continue
                target = ConicFrame(frame, up, dn, check=False).induced
                if not sublocale_leq(comp.sub, target.sub):
                    raise InternalInvariantViolation("composite is not inside the induced relation")
                if sublocale_eq(comp.sub, target.sub):
                    findings["equal"] += 1
                else:
                    findings["strict"] += 1
                    if len(findings["examples"]) < 3:
                        findings["examples"].append((c.key(), d.key()))
    return findings

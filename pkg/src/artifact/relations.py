"""Localic relations: sublocales of X×X, their source/target maps and cones."""
from __future__ import annotations

from functools import cached_property

import numpy as np

from . import _kernels
from .coproduct import codiagonal, copair, injections, square, swap
from .errors import (
    AmbientMismatch,
    BaseMismatch,
    InternalInvariantViolation,
    SourceNotOpen,
    TargetNotOpen,
)
from .lattice_core import FrameMap, MonotoneMap, Verdict, build_frame, frame_from_poset, iter_bits
from .locale_maps import LocaleMap, image, pullback
from .sublocales import (
    Nucleus,
    Sublocale,
    close_bits,
    closure_rules,
    closed_sublocale,
    identity_nucleus,
    open_sublocale,
    saturate,
    sublocale_eq,
    sublocale_leq,
    top_nucleus,
)


class LocalicRelation:
    """A relation R ↪ X×X given by a sublocale of O X ⊗ O X."""

    def __init__(self, base, sub):
        sq = square(base)
        if sub.ambient is not sq.frame and not sub.ambient.same_as(sq.frame):
            raise AmbientMismatch("sublocale does not live in the square of the base")
        self.base = base
        self.square = sq
        self.sub = sub

    @property
    def nucleus(self):
        return self.sub.nucleus

    @property
    def frame(self):
        """O R, the quotient frame."""
        return self.sub.quotient

    @property
    def r_inv(self):
        return self.sub.surjection

    @cached_property
    def s_inv(self):
        i1, _ = injections(self.square)
        return FrameMap(self.base, self.frame, self.r_inv.table[i1.table], check=False)

    @cached_property
    def t_inv(self):
        _, i2 = injections(self.square)
        return FrameMap(self.base, self.frame, self.r_inv.table[i2.table], check=False)

    @cached_property
    def source(self):
        return LocaleMap(self.s_inv)

    @cached_property
    def target(self):
        return LocaleMap(self.t_inv)

    def __eq__(self, other):
        other = getattr(other, "rel", other)
        if not isinstance(other, LocalicRelation):
            return NotImplemented
        return self.base.same_as(other.base) and sublocale_eq(self.sub, other.sub)

    __hash__ = None

    def __le__(self, other):
        other = getattr(other, "rel", other)
        if not self.base.same_as(other.base):
            raise BaseMismatch("relations on different bases")
        return bool(sublocale_leq(self.sub, other.sub))

    def __repr__(self):
        return f"LocalicRelation({len(self.sub.fixed)} of {self.square.frame.n})"


class OpenConeRelation:
    """A relation whose source and target are open, with its cones ↑ = t_!s⁻¹, ↓ = s_!t⁻¹."""

    def __init__(self, rel, s_shriek, t_shriek, up, dn):
        self.rel = rel
        self.s_shriek = s_shriek
        self.t_shriek = t_shriek
        self.up = up
        self.dn = dn

    base = property(lambda self: self.rel.base)
    square = property(lambda self: self.rel.square)
    sub = property(lambda self: self.rel.sub)
    nucleus = property(lambda self: self.rel.nucleus)
    frame = property(lambda self: self.rel.frame)
    s_inv = property(lambda self: self.rel.s_inv)
    t_inv = property(lambda self: self.rel.t_inv)
    source = property(lambda self: self.rel.source)
    target = property(lambda self: self.rel.target)

    def __eq__(self, other):
        return self.rel == other

    __hash__ = None

    def __le__(self, other):
        return self.rel <= other

    def __repr__(self):
        return f"OpenConeRelation(up={self.up.labelled()}, dn={self.dn.labelled()})"


def as_relation(r):
    return getattr(r, "rel", r)


def relation_from_sublocale(base, sub):
    return LocalicRelation(base, sub)


def _check_cones(base, up, dn):
    for name, cone in (("up", up), ("dn", dn)):
        if cone(base.bot) != base.bot:
            raise InternalInvariantViolation(f"{name} cone does not preserve bottom")
        x, y = _kernels.preserve_violation(cone.table, base.join, base.join)
        if x >= 0:
            raise InternalInvariantViolation(f"{name} cone does not preserve joins",
                                             witness=(base.labels[x], base.labels[y]))
    x, y, _ = _kernels.parallel_violation(up.table, dn.table, base.meet, base.leq_u8)
    if x >= 0:
        raise InternalInvariantViolation("cones are not parallel",
                                         witness=(base.labels[x], base.labels[y]))


def to_open_cone(rel):
    """Cone tables of a relation whose source and target maps are open."""
    if isinstance(rel, OpenConeRelation):
        return rel
    v = rel.source.open_verdict
    if not v:
        raise SourceNotOpen("source map fails Frobenius reciprocity", witness=v.witness)
    v = rel.target.open_verdict
    if not v:
        raise TargetNotOpen("target map fails Frobenius reciprocity", witness=v.witness)
    s_sh, t_sh = rel.source.shriek, rel.target.shriek
    base = rel.base
    up = MonotoneMap(base, base, t_sh.table[rel.s_inv.table], check=False)
    dn = MonotoneMap(base, base, s_sh.table[rel.t_inv.table], check=False)
    _check_cones(base, up, dn)
    return OpenConeRelation(rel, s_sh, t_sh, up, dn)


def has_open_cones(rel):
    rel = as_relation(rel)
    return rel.source.is_open and rel.target.is_open


# -- standard relations --------------------------------------------------------

def top_relation(base):
    sq = square(base)
    return LocalicRelation(base, Sublocale(identity_nucleus(sq.frame)))


def empty_relation(base):
    sq = square(base)
    return LocalicRelation(base, Sublocale(top_nucleus(sq.frame)))


def open_relation(base, u):
    """Open sublocale of X×X at the element ``u`` of the square."""
    return LocalicRelation(base, open_sublocale(square(base).frame, u))


def closed_relation(base, u):
    return LocalicRelation(base, closed_sublocale(square(base).frame, u))


def diagonal(base):
    cached = base._cache.get("diagonal")
    if cached is None:
        delta = LocaleMap(codiagonal(square(base)))
        cached = base._cache["diagonal"] = LocalicRelation(base, image(delta).sublocale)
    return cached


def kernel_pair(q):
    """Kernel pair of q: X -> Q, saturated inside O X ⊗ O X."""
    base = q.src
    sq = square(base)
    i1, i2 = injections(sq)
    gens = [(i1(q.inv(u)), i2(q.inv(u))) for u in range(q.dst.n)]
    return LocalicRelation(base, Sublocale(saturate(sq.frame, gens)))


def quotient_map(r):
    """q: X -> X/R, where O(X/R) is the subframe on which s⁻¹ and t⁻¹ agree."""
    r = as_relation(r)
    base = r.base
    s, t = r.s_inv.table, r.t_inv.table
    keep = [x for x in range(base.n) if s[x] == t[x]]
    labels = [base.labels[x] for x in keep]
    order = [(base.labels[a], base.labels[b]) for a in keep for b in keep
             if a != b and base.le(a, b)]
    return LocaleMap(FrameMap(build_frame(labels, order), base, keep))


def opposite(r):
    """R^op: the sublocale conjugated by the swap, with cones exchanged."""
    rel = as_relation(r)
    sw = swap(rel.square).table
    t = rel.nucleus.table
    flipped = LocalicRelation(rel.base, Sublocale(Nucleus(rel.square.frame, sw[t[sw]],
                                                         check=False)))
    if isinstance(r, OpenConeRelation):
        out = to_open_cone(flipped)
        if out.up != r.dn or out.dn != r.up:
            raise InternalInvariantViolation("opposite does not exchange the cones")
        return out
    return flipped


# -- composition ------------------------------------------------------------------

class _RectBits:
    """Rectangles of O A ⊗ O B as bitsets, without building the frame."""

    def __init__(self, a, b):
        self.a, self.b = a, b
        self.mb = b.points.m
        self.width = a.points.m * self.mb

    def rect(self, x, y):
        ys = self.b.enc[y]
        out = 0
        for p in iter_bits(self.a.enc[x]):
            out |= ys << (p * self.mb)
        return out

    def point_basis(self):
        return [self._rect_bits(self.a.points.down[i // self.mb], self.b.points.down[i % self.mb])
                for i in range(self.width)]

    def _rect_bits(self, xs, ys):
        out = 0
        for p in iter_bits(xs):
            out |= ys << (p * self.mb)
        return out


def compose(r, q, materialize=False):
    """R∘Q: the image of the pullback R ×_X Q under (s_R π_R, t_Q π_Q).

    By default the pullback is represented by bitsets over the product of
    the points of O R and O Q; ``materialize=True`` builds it as a frame.
    """
    r, q = to_open_cone(r), to_open_cone(q)
    if not r.base.same_as(q.base):
        raise BaseMismatch("composition needs relations on the same base")
    base = r.base
    sq = square(base)
    nu = _compose_materialized(r, q) if materialize else _compose_bits(r, q)
    out = to_open_cone(LocalicRelation(base, Sublocale(Nucleus(sq.frame, nu))))
    up = q.up.table[r.up.table]
    dn = r.dn.table[q.dn.table]
    if not (np.array_equal(out.up.table, up) and np.array_equal(out.dn.table, dn)):
        raise InternalInvariantViolation("cones of the composite are not the composite cones")
    return out


def _compose_bits(r, q):
    base = r.base
    sq = square(base)
    orr, oq = r.frame, q.frame
    rb = _RectBits(orr, oq)
    gens = [(rb.rect(r.t_inv(u), oq.top), rb.rect(orr.top, q.s_inv(u))) for u in range(base.n)]
    basis = rb.point_basis()
    rules = closure_rules(gens, basis)
    m = base.points.m
    phat = [rb.rect(r.s_inv(base.principal(k // m)), q.t_inv(base.principal(k % m)))
            for k in range(sq.width)]
    mu_point = close_bits(phat, rules, rb.width)
    starts = []
    for e in sq.frame.enc:
        acc = 0
        for k in iter_bits(e):
            acc |= phat[k]
        starts.append(acc)
    mu = close_bits(starts, rules, rb.width)
    table = []
    for v in mu:
        bits = 0
        for k in range(sq.width):
            if mu_point[k] & ~v == 0:
                bits |= 1 << k
        table.append(sq.frame.index_of_bits[bits])
    return table


def _compose_materialized(r, q):
    pb = pullback(r.target, q.source)
    p1 = r.source @ pb.pi1
    p2 = q.target @ pb.pi2
    p_inv = copair(square(r.base), p1.inv, p2.inv)
    return image(LocaleMap(p_inv)).sublocale.nucleus.table


# -- spatial relations -----------------------------------------------------------

def opens(space):
    """Frame of opens (down-closed sets) of a finite poset, cached on the poset."""
    cache = space.__dict__.setdefault("_opens_cache", {})
    if "frame" not in cache:
        cache["frame"] = frame_from_poset(space)
    return cache["frame"]


def spatial_bits(space, pairs):
    pos = {name: i for i, name in enumerate(space.labels)}
    bits = 0
    for p, q in pairs:
        i = pos[p] if not isinstance(p, int) else p
        j = pos[q] if not isinstance(q, int) else q
        bits |= 1 << (i * space.m + j)
    return bits


def from_spatial(space, pairs):
    """Localic relation of a relation on the points of a finite space."""
    base = opens(space)
    sq = square(base)
    rbits = spatial_bits(space, pairs)
    down = sq.product_points.down
    table = []
    for e in sq.frame.enc:
        w = e & rbits
        bits = 0
        for k in range(sq.width):
            if down[k] & rbits & ~w == 0:
                bits |= 1 << k
        table.append(sq.frame.index_of_bits[bits])
    return LocalicRelation(base, Sublocale(Nucleus(sq.frame, table)))


def spatial_cones(space, pairs):
    """Pointwise up/down images of opens, or None where an image is not open."""
    base = opens(space)
    rbits = spatial_bits(space, pairs)
    m = space.m
    related = [(k // m, k % m) for k in iter_bits(rbits)]

    def image_of(bits, forward):
        out = 0
        for i, j in related:
            src, dst = (i, j) if forward else (j, i)
            if bits >> src & 1:
                out |= 1 << dst
        return out

    tables = []
    for forward in (True, False):
        imgs = [image_of(e, forward) for e in base.enc]
        if any(not space.is_downset(b) for b in imgs):
            tables.append(None)
        else:
            tables.append([base.index_of_bits[b] for b in imgs])
    return tuple(tables)


# -- monotone maps and the rectangle kernel ---------------------------------------

def product_inverse(f):
    """(f×f)⁻¹: O Y ⊗ O Y -> O X ⊗ O X for f: X -> Y."""
    sx, sy = square(f.src), square(f.dst)
    i1, i2 = injections(sx)
    return copair(sy, i1 @ f.inv, i2 @ f.inv)


def is_monotone(f, r, q):
    """Does f: (X, R) -> (Y, Q) satisfy R ⊆ (f×f)⁻¹[Q]?"""
    r, q = as_relation(r), as_relation(q)
    if not r.base.same_as(f.src) or not q.base.same_as(f.dst):
        raise BaseMismatch("relations must sit on the frames of f")
    ff = product_inverse(f).table
    nr, nq = r.nucleus.table, q.nucleus.table
    bad = np.flatnonzero(nr[ff] != nr[ff[nq]])
    if len(bad):
        return Verdict(False, (q.square.frame.labels[int(bad[0])],))
    return Verdict(True)


def rectangle_kernel_law(r):
    """r⁻¹(A⊗B) = r⁻¹(C⊗D) exactly when the reduced cones of (A,B) and (C,D) agree."""
    r = to_open_cone(r)
    base = r.base
    nu = r.nucleus.table
    rt = r.square.rect_table
    up, dn = r.up.table, r.dn.table
    by_image, by_cones = {}, {}
    for a in range(base.n):
        for b in range(base.n):
            img = int(nu[rt[a, b]])
            red = (base.meet_of(a, int(dn[b])), base.meet_of(int(up[a]), b))
            if by_image.setdefault(img, red) != red or by_cones.setdefault(red, img) != img:
                return Verdict(False, (base.labels[a], base.labels[b]))
    return Verdict(True)

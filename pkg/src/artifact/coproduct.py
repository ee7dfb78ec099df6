"""The binary frame coproduct L⊗M as downsets of the product of point posets.

A rectangle x⊗y is the downset pts(x) × pts(y).  Everything that only needs
bitsets (rectangles, saturation inside the coproduct) works without building
the element tables; ``.frame`` materializes them on first use, under the cap.
"""
from __future__ import annotations

from functools import cached_property

import numpy as np

from .config import check_cap
from .errors import CodomainMismatch, InternalInvariantViolation, NotSquare
from .lattice_core import FiniteFrame, FrameMap, PointPoset, is_frame_map, iter_bits


class CoproductFrame:
    def __init__(self, left, right):
        self.left = left
        self.right = right
        self.product_points = left.points.product(right.points)

    @property
    def width(self):
        return self.product_points.m

    def rect_bits(self, x, y):
        """Bitset of x⊗y over the product points."""
        mr = self.right.points.m
        ys = self.right.enc[y]
        out = 0
        for p in iter_bits(self.left.enc[x]):
            out |= ys << (p * mr)
        return out

    @cached_property
    def rect_bits_table(self):
        return tuple(tuple(self.rect_bits(x, y) for y in range(self.right.n))
                     for x in range(self.left.n))

    @cached_property
    def point_rects(self):
        """For each product point (p, q): the pair of frame elements (↓p, ↓q)."""
        mr = self.right.points.m
        return tuple((self.left.principal(i // mr), self.right.principal(i % mr))
                     for i in range(self.width))

    @cached_property
    def frame(self):
        bits = self.product_points.downsets()
        check_cap(len(bits), "coproduct")
        return _CoproductElements(self, bits)

    def rect(self, x, y):
        return self.frame.index_of_bits[self.rect_bits(x, y)]

    @cached_property
    def rect_table(self):
        """``rect_table[x, y]`` is the element index of x⊗y."""
        f = self.frame
        return np.array([[f.index_of_bits[b] for b in row] for row in self.rect_bits_table],
                        dtype=np.int64)

    def maximal_rectangles(self, bits):
        """Maximal non-bottom rectangles below a downset, ordered by factor indices."""
        left, right = self.left, self.right
        table = self.rect_bits_table
        inside = [(x, y) for x in range(left.n) for y in range(right.n)
                  if x != left.bot and y != right.bot and table[x][y] & ~bits == 0]
        return [(x, y) for (x, y) in inside
                if not any((a, b) != (x, y) and left.le(x, a) and right.le(y, b)
                           for (a, b) in inside)]

    def label_of_bits(self, bits):
        if bits == 0:
            return "⊥"
        parts = [f"{self.left.labels[x]}⊗{self.right.labels[y]}"
                 for x, y in self.maximal_rectangles(bits)]
        if len(parts) == 1:
            return parts[0]
        return "∨".join(f"({p})" for p in parts)

    def __repr__(self):
        return f"CoproductFrame({self.left!r} ⊗ {self.right!r})"


class _CoproductElements(FiniteFrame):
    """Frame of a coproduct; labels are computed on demand."""

    def __init__(self, owner, bits):
        self._owner = owner
        super().__init__(owner.product_points, bits, labels=None)

    @cached_property
    def labels(self):
        return tuple(self._owner.label_of_bits(b) for b in self.enc)


def coproduct(left, right):
    return CoproductFrame(left, right)


def square(frame):
    """The coproduct frame⊗frame, cached on the frame so relations share it."""
    c = frame._cache.get("square")
    if c is None:
        c = frame._cache["square"] = CoproductFrame(frame, frame)
    return c


def injections(c):
    f = c.frame
    i1 = FrameMap(c.left, f, [c.rect(x, c.right.top) for x in range(c.left.n)], check=False)
    i2 = FrameMap(c.right, f, [c.rect(c.left.top, y) for y in range(c.right.n)], check=False)
    return i1, i2


def copair(c, h, k):
    """The frame map [h, k]: L⊗M -> N with [h,k](x⊗y) = h(x) ∧ k(y)."""
    if not h.cod.same_as(k.cod):
        raise CodomainMismatch("h and k must share a codomain")
    if not (h.dom.same_as(c.left) and k.dom.same_as(c.right)):
        raise CodomainMismatch("h and k must start at the coproduct factors")
    for m in (h, k):
        verdict = is_frame_map(m)
        if not verdict:
            from .errors import NotAFrameMap
            raise NotAFrameMap("copair needs frame maps", witness=verdict.witness)
    n = h.cod
    basis = [n.enc[h(x)] & n.enc[k(y)] for x, y in c.point_rects]
    table = []
    for e in c.frame.enc:
        acc = 0
        for i in iter_bits(e):
            acc |= basis[i]
        table.append(n.index_of_bits[acc])
    return FrameMap(c.frame, n, table)


def copair_is_unique(c, h, k, candidate):
    """False only if ``candidate`` restricts to h, k on the injections yet differs from [h,k]."""
    if not is_frame_map(candidate):
        return True
    i1, i2 = injections(c)
    if candidate @ i1 != h or candidate @ i2 != k:
        return True
    return candidate == copair(c, h, k)


def codiagonal(c):
    from .lattice_core import identity_map
    if not c.left.same_as(c.right):
        raise NotSquare("codiagonal needs L⊗L")
    return copair(c, identity_map(c.left), identity_map(c.right))


def tensor_map(src, dst, h, k):
    """h⊗k: src.left⊗src.right -> dst.left⊗dst.right for h: dst.left -> src.left etc.

    Frame maps go the locale way round here: ``h: dst.left -> src.left``.
    """
    i1, i2 = injections(src)
    return copair(dst, i1 @ h, i2 @ k)


def swap(c):
    if not c.left.same_as(c.right):
        raise NotSquare("swap needs L⊗L")
    m = c.left.points.m
    f = c.frame
    table = []
    for e in f.enc:
        out = 0
        for i in iter_bits(e):
            p, q = divmod(i, m)
            out |= 1 << (q * m + p)
        table.append(f.index_of_bits[out])
    return FrameMap(f, f, table)


# -- independent oracle -----------------------------------------------------------

def cideal_coproduct_oracle(left, right):
    """Coproduct built from C-ideals of L×M; returns (frame, iso into the fast path).

    A C-ideal is a downset of L×M that contains every (x,⊥) and (⊥,y) and is
    closed under joins in either coordinate with the other one fixed.  The
    iso sends an ideal to the union of its rectangles in the product poset.
    """
    nl, nr = left.n, right.n
    cells = [(x, y) for x in range(nl) for y in range(nr)]
    below = [sum(1 << (a * nr + b) for a in range(nl) for b in range(nr)
                 if left.le(a, x) and right.le(b, y)) for x, y in cells]
    base = 0
    for x in range(nl):
        base |= 1 << (x * nr + right.bot)
    for y in range(nr):
        base |= 1 << (left.bot * nr + y)

    rows = [[x * nr + y for y in range(nr)] for x in range(nl)]
    cols = [[x * nr + y for x in range(nl)] for y in range(nr)]

    def close(s):
        # Downward closed, plus each row (column) closed under joins: a row of
        # a C-ideal is therefore the principal downset of the join of its cells.
        s |= base
        while True:
            t = s
            for x, cells_x in enumerate(rows):
                ys = [y for y, i in enumerate(cells_x) if t >> i & 1]
                t |= below[x * nr + right.join_all(ys)]
            for y, cells_y in enumerate(cols):
                xs = [x for x, i in enumerate(cells_y) if t >> i & 1]
                t |= below[left.join_all(xs) * nr + y]
            if t == s:
                return s
            s = t

    def minimal_missing(s):
        # every strictly larger ideal contains one of these cells
        return [i for i in range(nl * nr)
                if not s >> i & 1 and (below[i] & ~(1 << i)) & ~s == 0]

    start = close(0)
    seen = {start}
    frontier = [start]
    while frontier:
        nxt = []
        for s in frontier:
            for i in minimal_missing(s):
                t = close(s | (1 << i))
                if t not in seen:
                    seen.add(t)
                    check_cap(len(seen), "C-ideal oracle")
                    nxt.append(t)
        frontier = nxt
    ideals = sorted(seen, key=lambda b: (bin(b).count("1"), b))
    n = len(ideals)
    if nl * nr <= 64:
        arr = np.array(ideals, dtype=np.uint64)
        leq = (arr[:, None] & ~arr[None, :]) == 0
    else:
        leq = np.array([[a & ~b == 0 for b in ideals] for a in ideals], dtype=bool)
    # join-irreducible ideals: exactly one lower cover in the inclusion order
    lt = leq & ~np.eye(n, dtype=bool)
    li = lt.astype(np.int64)
    covers = lt & ((li @ li) == 0)
    irr = [j for j in range(n) if covers[:, j].sum() == 1]
    points = PointPoset(leq[np.ix_(irr, irr)], [f"C{j}" for j in irr])
    enc = [sum(1 << k for k, j in enumerate(irr) if leq[j, i]) for i in range(n)]
    frame = FiniteFrame(points, enc, [f"C{i}" for i in range(n)])
    if len(set(enc)) != n or not np.array_equal(frame.leq, leq):
        raise InternalInvariantViolation("C-ideals do not form a distributive lattice")
    fast = CoproductFrame(left, right)
    iso = []
    for s in ideals:
        bits = 0
        for i in iter_bits(s):
            x, y = divmod(i, nr)
            bits |= fast.rect_bits(x, y)
        iso.append(bits)
    if len(set(iso)) != n:
        raise InternalInvariantViolation("C-ideal map is not injective")
    return frame, iso

"""Finite frames as finite distributive lattices.

A frame is stored through its Birkhoff dual: a poset of join-irreducible
"points" plus, for each element, the bitset of points below it.  Meet is
``&``, join is ``|`` and order is bit inclusion; the dense order/meet/join
tables are derived lazily for the exhaustive law checks.
"""
from __future__ import annotations

from functools import cached_property
from typing import NamedTuple

import numpy as np

from . import _kernels
from .config import check_cap, check_table
from .errors import (
    InternalInvariantViolation,
    NotAFrameMap,
    NotALattice,
    NotAPoset,
    NotDistributive,
    NotJoinPreserving,
    NotMeetPreserving,
    NotMonotone,
    UnknownName,
)


class Verdict(NamedTuple):
    """Boolean outcome of a law check plus the first failing instance."""

    ok: bool
    witness: object = None

    def __bool__(self):
        return self.ok


def _popcount(v):
    return bin(v).count("1")


def _frozen(arr):
    arr.setflags(write=False)
    return arr


def _transitive_closure(leq):
    leq = leq.copy()
    for k in range(leq.shape[0]):
        leq |= leq[:, k, None] & leq[None, k, :]
    return leq


class PointPoset:
    """A finite poset on points ``0..m-1``; ``leq[p, q]`` means p <= q."""

    def __init__(self, leq, labels=None):
        leq = np.array(leq, dtype=bool)
        if leq.ndim != 2 or leq.shape[0] != leq.shape[1]:
            raise NotAPoset("order matrix must be square")
        m = leq.shape[0]
        self.m = m
        self.labels = tuple(labels) if labels is not None else tuple(str(i) for i in range(m))
        if len(self.labels) != m or len(set(self.labels)) != m:
            raise NotAPoset("point labels must be distinct, one per point")
        if m and not leq.diagonal().all():
            p = int(np.flatnonzero(~leq.diagonal())[0])
            raise NotAPoset("order is not reflexive", witness=(self.labels[p],))
        anti = leq & leq.T & ~np.eye(m, dtype=bool)
        if anti.any():
            p, q = (int(v) for v in np.argwhere(anti)[0])
            raise NotAPoset(f"{self.labels[p]} and {self.labels[q]} lie below each other",
                            witness=(self.labels[p], self.labels[q]))
        if m and (_transitive_closure(leq) != leq).any():
            raise NotAPoset("order is not transitive")
        self.leq = _frozen(leq)

    @classmethod
    def from_relations(cls, labels, pairs):
        """Reflexive-transitive closure of ``pairs`` (label pairs p <= q)."""
        labels = list(labels)
        if len(set(labels)) != len(labels):
            raise NotAPoset("point labels must be distinct")
        pos = {name: i for i, name in enumerate(labels)}
        leq = np.eye(len(labels), dtype=bool)
        for p, q in pairs:
            if p not in pos or q not in pos:
                raise UnknownName(f"unknown point in {p} <= {q}", witness=(p, q))
            leq[pos[p], pos[q]] = True
        return cls(_transitive_closure(leq), labels)

    @classmethod
    def chain(cls, m):
        return cls(np.triu(np.ones((m, m), dtype=bool)))

    @classmethod
    def antichain(cls, m):
        return cls(np.eye(m, dtype=bool))

    @cached_property
    def down(self):
        """``down[p]``: bitset of the points below p."""
        return tuple(sum(1 << int(q) for q in np.flatnonzero(self.leq[:, p])) for p in range(self.m))

    @cached_property
    def up(self):
        return tuple(sum(1 << int(q) for q in np.flatnonzero(self.leq[p, :])) for p in range(self.m))

    @property
    def all_bits(self):
        return (1 << self.m) - 1

    def down_closure(self, bits):
        out = 0
        for p in iter_bits(bits):
            out |= self.down[p]
        return out

    def up_closure(self, bits):
        out = 0
        for p in iter_bits(bits):
            out |= self.up[p]
        return out

    def is_downset(self, bits):
        return self.down_closure(bits) == bits

    def product(self, other):
        """Product order; point (p, q) gets index ``p * other.m + q``."""
        leq = np.kron(self.leq, other.leq).astype(bool)
        labels = [f"({p},{q})" for p in self.labels for q in other.labels]
        return PointPoset(leq, labels)

    def dual(self):
        return PointPoset(self.leq.T, self.labels)

    def downsets(self):
        """All downsets as bitsets, sorted by (popcount, value)."""
        order = sorted(range(self.m), key=lambda p: _popcount(self.down[p]))
        # Walk points from the top of a linear extension down: a point is
        # forced in once something above it is in, otherwise it is free.
        found = []
        stack = [(len(order) - 1, 0)]
        while stack:
            i, bits = stack.pop()
            if i < 0:
                found.append(bits)
                check_cap(len(found), "downset enumeration")
                continue
            p = order[i]
            if bits & self.up[p] & ~(1 << p):
                stack.append((i - 1, bits | (1 << p)))
            else:
                stack.append((i - 1, bits))
                stack.append((i - 1, bits | (1 << p)))
        found.sort(key=lambda b: (_popcount(b), b))
        return found

    def __repr__(self):
        return f"PointPoset(m={self.m})"


def iter_bits(bits):
    i = 0
    while bits:
        if bits & 1:
            yield i
        bits >>= 1
        i += 1


class FiniteFrame:
    """A finite frame, i.e. a finite distributive lattice.

    Build one with :func:`build_frame`, :func:`frame_from_poset` or
    :meth:`from_downsets`; the constructor trusts its inputs.
    """

    def __init__(self, points, enc, labels):
        self.points = points
        self.enc = tuple(int(e) for e in enc)
        self.n = len(self.enc)
        if labels is not None:
            self.__dict__["labels"] = tuple(labels)
        self.index_of_bits = {e: i for i, e in enumerate(self.enc)}
        self.bot = self.index_of_bits[0]
        self.top = self.index_of_bits[points.all_bits]
        self._cache = {}

    @classmethod
    def from_downsets(cls, points, bits, labels=None):
        bits = list(bits)
        check_cap(len(bits), "frame")
        return cls(points, bits, labels)

    @cached_property
    def labels(self):
        return tuple(_set_label(self.points, b) for b in self.enc)

    @cached_property
    def _index_of_label(self):
        return {name: i for i, name in enumerate(self.labels)}

    # -- element access -------------------------------------------------
    def index(self, label):
        try:
            return self._index_of_label[label]
        except KeyError:
            raise UnknownName(f"no element named {label!r}", witness=(label,)) from None

    def label(self, x):
        return self.labels[x]

    def elements(self):
        return range(self.n)

    def __len__(self):
        return self.n

    def __repr__(self):
        return f"FiniteFrame(n={self.n}, points={self.points.m})"

    # -- lattice operations on indices -----------------------------------
    def le(self, x, y):
        return self.enc[x] & ~self.enc[y] == 0

    def meet_of(self, x, y):
        return self.index_of_bits[self.enc[x] & self.enc[y]]

    def join_of(self, x, y):
        return self.index_of_bits[self.enc[x] | self.enc[y]]

    def meet_all(self, xs):
        bits = self.points.all_bits
        for x in xs:
            bits &= self.enc[x]
        return self.index_of_bits[bits]

    def join_all(self, xs):
        bits = 0
        for x in xs:
            bits |= self.enc[x]
        return self.index_of_bits[bits]

    def heyting(self, x, z):
        bad = self.enc[x] & ~self.enc[z]
        return self.index_of_bits[self.points.all_bits & ~self.points.up_closure(bad)]

    def principal(self, p):
        """Element generated by point ``p`` (the join-irreducible itself)."""
        return self.index_of_bits[self.points.down[p]]

    @cached_property
    def irreducibles(self):
        return tuple(self.principal(p) for p in range(self.points.m))

    # -- dense tables ------------------------------------------------------
    @cached_property
    def _enc_array(self):
        return np.array(self.enc, dtype=np.uint64) if self.points.m <= 64 else None

    def _index_array(self, values):
        arr = self._enc_array
        order = np.argsort(arr)
        pos = np.searchsorted(arr[order], values)
        return order[pos].astype(np.int64)

    @cached_property
    def leq(self):
        check_table(self.n, "order table")
        arr = self._enc_array
        if arr is not None:
            out = (arr[:, None] & ~arr[None, :]) == 0
        else:
            out = np.array([[self.le(x, y) for y in range(self.n)] for x in range(self.n)])
        return _frozen(out)

    @cached_property
    def leq_u8(self):
        return _frozen(self.leq.view(np.uint8))

    @cached_property
    def meet(self):
        check_table(self.n, "meet table")
        arr = self._enc_array
        if arr is not None:
            out = self._index_array(arr[:, None] & arr[None, :])
        else:
            out = np.array([[self.meet_of(x, y) for y in range(self.n)] for x in range(self.n)],
                           dtype=np.int64)
        return _frozen(np.ascontiguousarray(out, dtype=np.int64))

    @cached_property
    def join(self):
        check_table(self.n, "join table")
        arr = self._enc_array
        if arr is not None:
            out = self._index_array(arr[:, None] | arr[None, :])
        else:
            out = np.array([[self.join_of(x, y) for y in range(self.n)] for x in range(self.n)],
                           dtype=np.int64)
        return _frozen(np.ascontiguousarray(out, dtype=np.int64))

    def same_as(self, other):
        return self is other or (
            self.labels == other.labels
            and self.enc == other.enc
            and np.array_equal(self.points.leq, other.points.leq)
        )


def _set_label(points, bits):
    if bits == 0:
        return "∅"
    return "{" + ",".join(points.labels[p] for p in iter_bits(bits)) + "}"


# -- construction ------------------------------------------------------------

def _extremal_table(leq, lower):
    """Meet (lower=True) or join table of an order, or a failing pair."""
    n = leq.shape[0]
    rel = leq if lower else leq.T           # rel[z, x]: z below x (or above for joins)
    out = np.empty((n, n), dtype=np.int64)
    li = leq.astype(np.int64) if lower else leq.T.astype(np.int64)
    for x in range(n):
        bounds = rel[:, x][None, :] & rel.T          # [y, z]: z bounds both x and y
        counts = bounds.astype(np.int64) @ li        # [y, g]: #bounds on the right side of g
        best = bounds & (counts == bounds.sum(axis=1)[:, None])
        hits = best.sum(axis=1)
        if (hits != 1).any():
            y = int(np.flatnonzero(hits != 1)[0])
            return None, (x, y)
        out[x] = best.argmax(axis=1)
    return out, None


def build_frame(elements, leq_pairs):
    """Frame from labelled elements and generating order pairs ``(x, y)`` for x <= y."""
    labels = list(elements)
    if len(set(labels)) != len(labels):
        dup = next(e for e in labels if labels.count(e) > 1)
        raise NotAPoset(f"element {dup!r} declared twice", witness=(dup,))
    if not labels:
        raise NotALattice("a frame needs at least one element")
    pos = {name: i for i, name in enumerate(labels)}
    n = len(labels)
    leq = np.eye(n, dtype=bool)
    for a, b in leq_pairs:
        for name in (a, b):
            if name not in pos:
                raise UnknownName(f"unknown element {name!r}", witness=(name,))
        leq[pos[a], pos[b]] = True
    leq = _transitive_closure(leq)
    anti = leq & leq.T & ~np.eye(n, dtype=bool)
    if anti.any():
        x, y = (int(v) for v in np.argwhere(anti)[0])
        raise NotAPoset(f"cycle through {labels[x]} and {labels[y]}",
                        witness=(labels[x], labels[y]))
    meet, bad = _extremal_table(leq, lower=True)
    if bad is not None:
        raise NotALattice(f"{labels[bad[0]]} and {labels[bad[1]]} have no meet",
                          witness=(labels[bad[0]], labels[bad[1]]))
    join, bad = _extremal_table(leq, lower=False)
    if bad is not None:
        raise NotALattice(f"{labels[bad[0]]} and {labels[bad[1]]} have no join",
                          witness=(labels[bad[0]], labels[bad[1]]))
    x, y, z = _kernels.distributivity_violation(meet, join)
    if x >= 0:
        w = (labels[x], labels[y], labels[z])
        raise NotDistributive(f"{w[0]} ∧ ({w[1]} ∨ {w[2]}) breaks distributivity", witness=w)
    return _frame_from_tables(labels, leq, meet, join)


def _frame_from_tables(labels, leq, meet, join):
    n = len(labels)
    bot = int(np.flatnonzero(leq.all(axis=1))[0])
    irr = []
    for x in range(n):
        if x == bot:
            continue
        below = [y for y in range(n) if leq[y, x] and y != x]
        j = bot
        for y in below:
            j = join[j, y]
        if j != x:
            irr.append(x)
    points = PointPoset(leq[np.ix_(irr, irr)], [labels[p] for p in irr])
    enc = [sum(1 << i for i, p in enumerate(irr) if leq[p, x]) for x in range(n)]
    frame = FiniteFrame(points, enc, labels)
    if len(set(enc)) != n or not np.array_equal(frame.meet, meet) \
            or not np.array_equal(frame.join, join):
        raise InternalInvariantViolation("Birkhoff encoding disagrees with the lattice tables")
    return frame


def frame_from_poset(p, labels=None):
    """Frame of down-closed subsets of ``p`` ordered by inclusion."""
    return FiniteFrame.from_downsets(p, p.downsets(), labels)


def chain_frame(n, labels=None):
    """The n-element chain; default labels are ⊥, a, b, ..., ⊤ (3-chain: ⊥ < a < ⊤)."""
    if labels is None:
        if n == 1:
            labels = ["⊥"]
        else:
            labels = ["⊥"] + [chr(ord("a") + i) for i in range(n - 2)] + ["⊤"]
    return frame_from_poset(PointPoset.chain(n - 1), labels)


def boolean_frame(k, atoms=None):
    """Boolean frame on ``k`` atoms (2**k elements)."""
    atoms = list(atoms) if atoms is not None else [chr(ord("x") + i) if k <= 3 else f"p{i}"
                                                   for i in range(k)]
    return frame_from_poset(PointPoset(np.eye(k, dtype=bool), atoms))


def truth_frame():
    """The two-element frame {⊥ < ⊤} of classical truth values."""
    return frame_from_poset(PointPoset.chain(1), ["⊥", "⊤"])


def join_irreducibles(f):
    """Points of ``f`` with the isomorphism to and from downset bitsets."""
    return f.points, f.enc, dict(f.index_of_bits)


def heyting(f, x, z):
    return f.heyting(x, z)


def is_join_basis(f, basis):
    basis = list(basis)
    for x in range(f.n):
        acc = 0
        for e in basis:
            if f.enc[e] & ~f.enc[x] == 0:
                acc |= f.enc[e]
        if acc != f.enc[x]:
            return False
    return True


# -- maps ----------------------------------------------------------------------

class MonotoneMap:
    """An order-preserving map between finite frames, stored as a table."""

    def __init__(self, dom, cod, table, check=True):
        table = np.array(table, dtype=np.int64).reshape(-1)
        if len(table) != dom.n:
            raise NotMonotone(f"table has {len(table)} entries for {dom.n} elements")
        if len(table) and (table.min() < 0 or table.max() >= cod.n):
            raise NotMonotone("table entry out of range")
        self.dom = dom
        self.cod = cod
        self.table = _frozen(table)
        if check:
            bad = dom.leq & ~cod.leq[np.ix_(table, table)]
            if bad.any():
                x, y = (int(v) for v in np.argwhere(bad)[0])
                raise NotMonotone(f"{dom.labels[x]} ⊑ {dom.labels[y]} but images are not ordered",
                                  witness=(dom.labels[x], dom.labels[y]))

    def __call__(self, x):
        return int(self.table[x])

    def __matmul__(self, other):
        """``g @ f`` is the composite g∘f."""
        if not self.dom.same_as(other.cod):
            from .errors import NotComposable
            raise NotComposable("codomain of the right map is not the domain of the left one")
        cls = FrameMap if isinstance(self, FrameMap) and isinstance(other, FrameMap) else MonotoneMap
        return cls(other.dom, self.cod, self.table[other.table], check=False)

    def __eq__(self, other):
        if not isinstance(other, MonotoneMap):
            return NotImplemented
        return (self.dom.same_as(other.dom) and self.cod.same_as(other.cod)
                and np.array_equal(self.table, other.table))

    __hash__ = None

    def labelled(self):
        """Table as ``{dom label: cod label}``."""
        return {self.dom.labels[x]: self.cod.labels[int(y)] for x, y in enumerate(self.table)}

    def __repr__(self):
        pairs = ", ".join(f"{k}↦{v}" for k, v in self.labelled().items())
        return f"{type(self).__name__}({pairs})"


def is_frame_map(h):
    """Does ``h`` preserve ⊤, ⊥, binary meets and binary joins?"""
    d, c = h.dom, h.cod
    if h(d.top) != c.top:
        return Verdict(False, ("top", d.labels[d.top]))
    if h(d.bot) != c.bot:
        return Verdict(False, ("bottom", d.labels[d.bot]))
    x, y = _kernels.preserve_violation(h.table, d.meet, c.meet)
    if x >= 0:
        return Verdict(False, ("meet", d.labels[x], d.labels[y]))
    x, y = _kernels.preserve_violation(h.table, d.join, c.join)
    if x >= 0:
        return Verdict(False, ("join", d.labels[x], d.labels[y]))
    return Verdict(True)


class FrameMap(MonotoneMap):
    """A map preserving finite meets and all joins."""

    def __init__(self, dom, cod, table, check=True):
        super().__init__(dom, cod, table, check=check)
        if check:
            verdict = is_frame_map(self)
            if not verdict:
                raise NotAFrameMap(f"not a frame map: fails {verdict.witness[0]} preservation",
                                   witness=verdict.witness)


def identity_map(frame):
    return FrameMap(frame, frame, np.arange(frame.n), check=False)


def constant_map(dom, cod, value):
    return MonotoneMap(dom, cod, np.full(dom.n, value), check=False)


def as_frame_map(m):
    return m if isinstance(m, FrameMap) else FrameMap(m.dom, m.cod, m.table)


def left_adjoint_of(g):
    """Left adjoint of a meet-preserving ``g: Q -> P`` as a map ``P -> Q``."""
    q, p = g.dom, g.cod
    if g(q.top) != p.top:
        raise NotMeetPreserving("top is not preserved", witness=("top",))
    x, y = _kernels.preserve_violation(g.table, q.meet, p.meet)
    if x >= 0:
        raise NotMeetPreserving("binary meet is not preserved", witness=(q.labels[x], q.labels[y]))
    table = _kernels.left_adjoint(g.table, p.leq_u8, q.meet, q.top)
    f = MonotoneMap(p, q, table, check=False)
    _assert_adjoint(f, g)
    return f


def right_adjoint_of(f):
    """Right adjoint of a join-preserving ``f: L -> M`` as a map ``M -> L``."""
    l, m = f.dom, f.cod
    if f(l.bot) != m.bot:
        raise NotJoinPreserving("bottom is not preserved", witness=("bottom",))
    x, y = _kernels.preserve_violation(f.table, l.join, m.join)
    if x >= 0:
        raise NotJoinPreserving("binary join is not preserved", witness=(l.labels[x], l.labels[y]))
    table = _kernels.right_adjoint(f.table, m.leq_u8, l.join, l.bot)
    g = MonotoneMap(m, l, table, check=False)
    _assert_adjoint(f, g)
    return g


def adjunction_holds(f, g):
    """Check ``f(x) ⊑ y  iff  x ⊑ g(y)`` for all x, y."""
    x, y = _kernels.adjunction_violation(f.table, g.table, f.dom.leq_u8, f.cod.leq_u8)
    if x >= 0:
        return Verdict(False, (f.dom.labels[x], f.cod.labels[y]))
    return Verdict(True)


def _assert_adjoint(f, g):
    verdict = adjunction_holds(f, g)
    if not verdict:
        raise InternalInvariantViolation("synthesized adjoint fails the adjunction law",
                                         witness=verdict.witness)

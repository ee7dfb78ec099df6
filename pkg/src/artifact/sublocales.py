"""Sublocales as nuclei, congruences or fixed-point sets, and congruence saturation."""
from __future__ import annotations

from functools import cached_property

import numpy as np

from . import _kernels
from .errors import AmbientMismatch, HypothesisViolated, NotANucleus
from .lattice_core import FiniteFrame, FrameMap, PointPoset, Verdict


# -- bitset closure ---------------------------------------------------------------

def closure_rules(pairs, basis, both_ways=True):
    """Rules ``(src, dst)`` for the step e ↦ e ∨ (b∧c) whenever a∧c ⊑ e.

    ``pairs`` and ``basis`` are bitsets.  Rules whose conclusion already
    follows from their premise are dropped, duplicates merged.
    """
    rules = {}
    for a, b in pairs:
        directions = ((a, b), (b, a)) if both_ways else ((a, b),)
        for lhs, rhs in directions:
            for c in basis:
                src, dst = lhs & c, rhs & c
                if dst & ~src:
                    rules[(src, dst)] = None
    return list(rules)


def close_bits(starts, rules, width):
    """Least fixpoint of the rules above each start bitset."""
    if not rules:
        return [int(s) for s in starts]
    src = [r[0] for r in rules]
    dst = [r[1] for r in rules]
    return _kernels.saturate_bits(list(starts), src, dst, width)


# -- nuclei -----------------------------------------------------------------------

def nucleus_law_violation(frame, table):
    """Name and witness of the first failed nucleus law, or None."""
    t = np.asarray(table, dtype=np.int64)
    leq = frame.leq
    bad = ~leq[np.arange(frame.n), t]
    if bad.any():
        x = int(np.flatnonzero(bad)[0])
        return "inflationary", (frame.labels[x],)
    bad = t[t] != t
    if bad.any():
        x = int(np.flatnonzero(bad)[0])
        return "idempotent", (frame.labels[x],)
    x, y = _kernels.preserve_violation(t, frame.meet, frame.meet)
    if x >= 0:
        return "meet-preserving", (frame.labels[x], frame.labels[y])
    return None


class Nucleus:
    def __init__(self, frame, table, check=True):
        table = np.array(table, dtype=np.int64)
        table.setflags(write=False)
        self.frame = frame
        self.table = table
        if check:
            bad = nucleus_law_violation(frame, table)
            if bad is not None:
                raise NotANucleus(f"table is not {bad[0]}", witness=bad[1])

    def __call__(self, x):
        return int(self.table[x])

    def __eq__(self, other):
        if not isinstance(other, Nucleus):
            return NotImplemented
        return self.frame.same_as(other.frame) and np.array_equal(self.table, other.table)

    __hash__ = None

    def labelled(self):
        f = self.frame
        return {f.labels[x]: f.labels[int(y)] for x, y in enumerate(self.table)}


def identity_nucleus(frame):
    return Nucleus(frame, np.arange(frame.n), check=False)


def top_nucleus(frame):
    return Nucleus(frame, np.full(frame.n, frame.top), check=False)


def saturate(frame, pairs):
    """Nucleus whose fixed points are the elements saturated for ``pairs``."""
    enc = frame.enc
    basis = [frame.points.down[p] for p in range(frame.points.m)]
    rules = closure_rules([(enc[a], enc[b]) for a, b in pairs], basis)
    closed = close_bits(enc, rules, frame.points.m)
    return Nucleus(frame, [frame.index_of_bits[e] for e in closed])


def saturated_bruteforce(frame, pairs):
    """Saturated elements by direct evaluation of the defining predicate over all c."""
    leq, meet = frame.leq, frame.meet
    ok = np.ones(frame.n, dtype=bool)
    for a, b in pairs:
        lhs = leq[meet[a]]          # [c, s]: a∧c ⊑ s
        rhs = leq[meet[b]]
        ok &= (lhs == rhs).all(axis=0)
    return frozenset(int(s) for s in np.flatnonzero(ok))


def nucleus_from_sublocale_set(frame, fixed):
    """ν(x) = least member of ``fixed`` above x (``fixed`` must be meet-closed)."""
    fixed = sorted(fixed)
    table = []
    for x in range(frame.n):
        table.append(frame.meet_all(s for s in fixed if frame.le(x, s)))
    return Nucleus(frame, table)


def nucleus_from_congruence(frame, related):
    """ν(x) = largest element congruent to x."""
    table = [frame.join_all(y for y in range(frame.n) if related(x, y)) for x in range(frame.n)]
    return Nucleus(frame, table)


def simplified_saturated(frame, pairs, basis=None):
    """Elements s with x ⊑ s iff y ⊑ s for every generating pair.

    This agrees with full saturation when the pairs are stable under meets
    with a join basis.  The hypothesis is checked on the result: every
    (x∧b, y∧b) must be separated by no candidate element.
    """
    if basis is None:
        basis = frame.irreducibles
    leq = frame.leq
    ok = np.ones(frame.n, dtype=bool)
    for x, y in pairs:
        ok &= leq[x] == leq[y]
    cand = np.flatnonzero(ok)
    for x, y in pairs:
        for b in basis:
            xb, yb = frame.meet_of(x, b), frame.meet_of(y, b)
            differ = leq[xb, cand] != leq[yb, cand]
            if differ.any():
                s = int(cand[np.flatnonzero(differ)[0]])
                raise HypothesisViolated(
                    "generating pairs are not stable under meets with the basis",
                    witness=(frame.labels[x], frame.labels[y], frame.labels[b], frame.labels[s]))
    return frozenset(int(s) for s in cand)


# -- sublocales ----------------------------------------------------------------------

class _QuotientFrame(FiniteFrame):
    """Quotient frame whose labels are the least representatives of each class."""

    def __init__(self, sub, points, enc):
        self._sub = sub
        super().__init__(points, enc, labels=None)

    @cached_property
    def labels(self):
        amb = self._sub.ambient
        return tuple(amb.labels[r] for r in self._sub.representatives)


class Sublocale:
    """A sublocale given by its nucleus; the quotient frame is built eagerly."""

    def __init__(self, nucleus):
        self.nucleus = nucleus
        self.ambient = amb = nucleus.frame
        t = nucleus.table
        self.fixed = tuple(int(x) for x in np.flatnonzero(t == np.arange(amb.n)))
        self.position = {f: i for i, f in enumerate(self.fixed)}
        self.quotient = self._build_quotient()
        self.surjection = FrameMap(amb, self.quotient, [self.position[int(v)] for v in t],
                                   check=False)

    def _build_quotient(self):
        amb, t = self.ambient, self.nucleus.table
        enc = amb.enc
        nu_bits = lambda bits: enc[t[amb.index_of_bits[bits]]]  # noqa: E731
        fixed_bits = [enc[f] for f in self.fixed]
        bottom = enc[t[amb.bot]]
        irr = []
        for fb in fixed_bits:
            if fb == bottom:
                continue
            below = 0
            for gb in fixed_bits:
                if gb != fb and gb & ~fb == 0:
                    below |= gb
            if nu_bits(below) != fb:
                irr.append(fb)
        k = len(irr)
        leq = np.array([[a & ~b == 0 for b in irr] for a in irr], dtype=bool).reshape(k, k)
        points = PointPoset(leq, [str(i) for i in range(k)])
        q_enc = [sum(1 << i for i, p in enumerate(irr) if p & ~fb == 0) for fb in fixed_bits]
        return _QuotientFrame(self, points, q_enc)

    @cached_property
    def representatives(self):
        """Least element of each congruence class, per quotient element."""
        amb, t = self.ambient, self.nucleus.table
        acc = {f: amb.points.all_bits for f in self.fixed}
        for x in range(amb.n):
            acc[int(t[x])] &= amb.enc[x]
        return tuple(amb.index_of_bits[acc[f]] for f in self.fixed)

    def embed(self, q):
        """Ambient element (fixed point) for quotient element ``q``."""
        return self.fixed[q]

    def factor(self, h):
        """Unique frame map h̄ on the quotient with h̄∘surjection = h."""
        t = self.nucleus.table
        bad = h.table != h.table[t]
        if bad.any():
            x = int(np.flatnonzero(bad)[0])
            raise HypothesisViolated("map does not equalise the congruence",
                                     witness=(self.ambient.labels[x],))
        return FrameMap(self.quotient, h.cod, [h(f) for f in self.fixed])

    def __eq__(self, other):
        if not isinstance(other, Sublocale):
            return NotImplemented
        return self.nucleus == other.nucleus

    __hash__ = None

    def __repr__(self):
        return f"Sublocale({len(self.fixed)} of {self.ambient.n})"


def quotient_of_nucleus(nu):
    return Sublocale(nu)


def convert_representation(s):
    t = s.nucleus.table

    def congruence(x, y):
        return t[x] == t[y]

    return congruence, frozenset(s.fixed)


def open_sublocale(frame, u):
    return Sublocale(Nucleus(frame, [frame.heyting(u, x) for x in range(frame.n)]))


def closed_sublocale(frame, u):
    return Sublocale(Nucleus(frame, [frame.join_of(x, u) for x in range(frame.n)]))


def sublocale_leq(a, b):
    """A ⊆ B, i.e. ν_B ⊑ ν_A pointwise."""
    if not a.ambient.same_as(b.ambient):
        raise AmbientMismatch("sublocales live in different frames")
    leq = a.ambient.leq
    bad = ~leq[b.nucleus.table, a.nucleus.table]
    if bad.any():
        x = int(np.flatnonzero(bad)[0])
        return Verdict(False, (a.ambient.labels[x],))
    return Verdict(True)


def sublocale_eq(a, b):
    return bool(sublocale_leq(a, b)) and bool(sublocale_leq(b, a))

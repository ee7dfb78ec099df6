"""Locale maps as frame maps in the opposite direction."""
from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property

import numpy as np

from . import _kernels
from .coproduct import coproduct, copair, injections
from .errors import CodomainMismatch, NotAFrameMap, NotComposable
from .lattice_core import (
    FrameMap,
    Verdict,
    identity_map,
    is_frame_map,
    left_adjoint_of,
    right_adjoint_of,
    truth_frame,
)
from .sublocales import Nucleus, Sublocale, saturate

TRUTH = truth_frame()


class LocaleMap:
    """f: X -> Y held as f⁻¹: O Y -> O X.

    ``src`` is O X and ``dst`` is O Y.  Both adjoints of f⁻¹ always exist for
    finite frames; ``is_open`` is the Frobenius condition on the left one.
    """

    def __init__(self, inv):
        self.inv = inv
        self.src = inv.cod
        self.dst = inv.dom

    @cached_property
    def star(self):
        return right_adjoint_of(self.inv)

    @cached_property
    def shriek(self):
        return left_adjoint_of(self.inv)

    @cached_property
    def open_verdict(self):
        return check_open(self)

    @property
    def is_open(self):
        return bool(self.open_verdict)

    def __matmul__(self, other):
        """``g @ f`` is the locale map g∘f."""
        if not other.dst.same_as(self.src):
            raise NotComposable("maps do not compose")
        return LocaleMap(other.inv @ self.inv)

    def __eq__(self, other):
        if not isinstance(other, LocaleMap):
            return NotImplemented
        return self.inv == other.inv

    __hash__ = None

    def __repr__(self):
        return f"LocaleMap(inv={self.inv!r})"


def make_locale_map(inv):
    verdict = is_frame_map(inv)
    if not verdict:
        raise NotAFrameMap("inverse image is not a frame map", witness=verdict.witness)
    if not isinstance(inv, FrameMap):
        inv = FrameMap(inv.dom, inv.cod, inv.table, check=False)
    return LocaleMap(inv)


def check_open(f):
    """Frobenius reciprocity f_!(U ∧ f⁻¹V) = f_!U ∧ V, with a failing (U, V)."""
    u, v = _kernels.frobenius_violation(f.shriek.table, f.inv.table, f.src.meet, f.dst.meet)
    if u >= 0:
        return Verdict(False, (f.src.labels[u], f.dst.labels[v]))
    return Verdict(True)


def identity_locale_map(frame):
    return LocaleMap(identity_map(frame))


def terminal_map(frame):
    """The unique map X -> 1 (1 is the locale of the truth frame)."""
    return LocaleMap(FrameMap(TRUTH, frame, [frame.bot, frame.top]))


@dataclass(frozen=True)
class Image:
    sublocale: Sublocale
    epi: LocaleMap
    mono: LocaleMap
    is_epi: bool


def image(f):
    """Epi-mono factorization through the image sublocale of ``f.dst``."""
    nu = Nucleus(f.dst, f.star.table[f.inv.table])
    sub = Sublocale(nu)
    epi = LocaleMap(FrameMap(sub.quotient, f.src, [f.inv(x) for x in sub.fixed], check=False))
    mono = LocaleMap(sub.surjection)
    is_epi = len(set(f.inv.table.tolist())) == f.dst.n
    return Image(sub, epi, mono, is_epi)


@dataclass(frozen=True)
class Pullback:
    frame: object
    pi1: LocaleMap
    pi2: LocaleMap
    sublocale: Sublocale
    coproduct: object


def pullback(f1, f2):
    """Y ×_X Z as a quotient of O Y ⊗ O Z."""
    if not f1.dst.same_as(f2.dst):
        raise CodomainMismatch("pullback needs a shared codomain")
    y, z, x = f1.src, f2.src, f1.dst
    c = coproduct(y, z)
    i1, i2 = injections(c)
    gens = [(i1(f1.inv(u)), i2(f2.inv(u))) for u in range(x.n)]
    sub = Sublocale(saturate(c.frame, gens))
    pi1 = LocaleMap(FrameMap(y, sub.quotient, sub.surjection.table[i1.table], check=False))
    pi2 = LocaleMap(FrameMap(z, sub.quotient, sub.surjection.table[i2.table], check=False))
    return Pullback(sub.quotient, pi1, pi2, sub, c)


def pullback_commutes(f1, f2, pb):
    lhs = pb.pi1.inv.table[f1.inv.table]
    rhs = pb.pi2.inv.table[f2.inv.table]
    bad = np.flatnonzero(lhs != rhs)
    if len(bad):
        return Verdict(False, (f1.dst.labels[int(bad[0])],))
    return Verdict(True)


def pullback_factor(pb, g1, g2, f1, f2):
    """The mediating map W -> P for a commuting cone g1: W -> Y, g2: W -> Z."""
    if (f1 @ g1) != (f2 @ g2):
        raise CodomainMismatch("the cone does not commute over the base")
    h = copair(pb.coproduct, g1.inv, g2.inv)
    return LocaleMap(pb.sublocale.factor(h))


def beck_chevalley(f1, f2, pb):
    """f1⁻¹∘(f2)_! = (π1)_!∘π2⁻¹ as tables."""
    lhs = f1.inv.table[f2.shriek.table]
    rhs = pb.pi1.shriek.table[pb.pi2.inv.table]
    bad = np.flatnonzero(lhs != rhs)
    if len(bad):
        return Verdict(False, (f2.src.labels[int(bad[0])],))
    return Verdict(True)


@dataclass(frozen=True)
class Density:
    dense: bool
    strongly_dense: bool
    note: str = "classical truth values: strong density coincides with density"


def density(f):
    dense = f.star(f.src.bot) == f.dst.bot
    bang_src, bang_dst = terminal_map(f.src), terminal_map(f.dst)
    strong = all(f.dst.le(f.star(bang_src.inv(p)), bang_dst.inv(p)) for p in range(TRUTH.n))
    return Density(dense, strong)


def open_composition_laws(f, g):
    """For open g: X -> Y and f: Y -> Z, (f∘g)_! = f_!∘g_!."""
    if not g.dst.same_as(f.src):
        raise NotComposable("maps do not compose")
    fg = f @ g
    lhs = fg.shriek.table
    rhs = f.shriek.table[g.shriek.table]
    bad = np.flatnonzero(lhs != rhs)
    return {
        "composite open": fg.open_verdict,
        "shriek of composite": Verdict(not len(bad), None if not len(bad)
                                       else (g.src.labels[int(bad[0])],)),
    }


def descent_law(g, e):
    """For epi e and open f = g∘e: g is open with g_! = f_!∘e⁻¹."""
    if not e.dst.same_as(g.src):
        raise NotComposable("maps do not compose")
    f = g @ e
    report = {
        "e epi": Verdict(len(set(e.inv.table.tolist())) == e.dst.n),
        "f open": f.open_verdict,
    }
    if report["e epi"] and report["f open"]:
        report["g open"] = g.open_verdict
        rhs = f.shriek.table[e.inv.table]
        report["g shriek"] = Verdict(bool(np.array_equal(g.shriek.table, rhs)))
    return report

"""Relational properties at the sublocale and cone level, and Egli-Milner orders."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import _kernels
from .conic import ConicFrame, cones_of, enumerate_conic_structures
from .errors import InternalInvariantViolation, NotAClosureOperator, NotAnEMOrder
from .relations import compose, diagonal, opposite, to_open_cone
from .sublocales import sublocale_eq, sublocale_leq

# internal flag -> cone flag it implies
IMPLIES = {
    "reflexive": "inflationary",
    "transitive": "subidempotent",
    "symmetric": "equal_cones",
    "interpolative": "cone_interpolative",
}


def internal_properties(r):
    r = to_open_cone(r)
    rr = compose(r, r)
    return {
        "reflexive": bool(sublocale_leq(diagonal(r.base).sub, r.sub)),
        "transitive": bool(sublocale_leq(rr.sub, r.sub)),
        "symmetric": sublocale_eq(opposite(r.rel).sub, r.sub),
        "interpolative": bool(sublocale_leq(r.sub, rr.sub)),
    }


def cone_properties(c):
    leq = c.frame.leq
    idx = np.arange(c.frame.n)
    up, dn = c.up.table, c.dn.table
    return {
        "inflationary": bool(leq[idx, up].all() and leq[idx, dn].all()),
        "subidempotent": bool(leq[up[up], up].all() and leq[dn[dn], dn].all()),
        "equal_cones": bool(np.array_equal(up, dn)),
        "cone_interpolative": bool(leq[up, up[up]].all() and leq[dn, dn[dn]].all()),
    }


@dataclass(frozen=True)
class PropertyReport:
    internal: dict
    cone_level: dict


def property_report(r):
    """Both flag sets; an internal flag that holds forces its cone flag."""
    r = to_open_cone(r)
    report = PropertyReport(internal_properties(r), cone_properties(cones_of(r)))
    for inner, outer in IMPLIES.items():
        if report.internal[inner] and not report.cone_level[outer]:
            raise InternalInvariantViolation(f"{inner} relation without {outer} cones")
    return report


def induced_property_theorem(c):
    """On R_↑↓ the first three properties match their cone counterparts exactly.

    Interpolativity is only known one way, so it is reported, not asserted.
    """
    r = c.induced
    inner = internal_properties(r)
    cone = cone_properties(c)
    out = {}
    for prop in ("reflexive", "transitive", "symmetric"):
        if inner[prop] != cone[IMPLIES[prop]]:
            raise InternalInvariantViolation(f"{prop} disagrees with {IMPLIES[prop]} on R_↑↓")
        out[prop] = inner[prop]
    out["interpolative"] = inner["interpolative"]
    out["cone_interpolative"] = cone["cone_interpolative"]
    out["interpolative_status"] = "one-way only"
    return out


# -- Egli-Milner orders ---------------------------------------------------------------

def _closure_violation(frame, table):
    leq = frame.leq
    t = np.asarray(table)
    idx = np.arange(frame.n)
    if not leq[idx, t].all():
        return "inflationary"
    if not leq[np.ix_(t, t)][leq].all():
        return "monotone"
    if not leq[t[t], t].all():
        return "subidempotent"
    return None


class EMOrder:
    """A preorder ⪯ on a frame whose graph is closed under binary joins."""

    def __init__(self, frame, leq):
        rel = np.array(leq, dtype=bool)
        self.frame = frame
        n = frame.n
        if not rel.diagonal().all():
            raise NotAnEMOrder("⪯ is not reflexive")
        if (rel.astype(np.int64) @ rel.astype(np.int64) > 0)[~rel].any():
            raise NotAnEMOrder("⪯ is not transitive")
        pairs = np.argwhere(rel)
        join = frame.join
        for u, v in pairs:
            if not rel[join[u, pairs[:, 0]], join[v, pairs[:, 1]]].all():
                raise NotAnEMOrder("⪯ is not closed under joins")
        if n and not rel[frame.bot, frame.bot]:
            raise NotAnEMOrder("⊥ ⪯ ⊥ fails")
        rel.setflags(write=False)
        self.leq = rel

    def __eq__(self, other):
        if not isinstance(other, EMOrder):
            return NotImplemented
        return self.frame.same_as(other.frame) and np.array_equal(self.leq, other.leq)

    __hash__ = None


def em_order_from_monads(frame, up, dn):
    up = np.asarray(getattr(up, "table", up))
    dn = np.asarray(getattr(dn, "table", dn))
    for name, t in (("up", up), ("dn", dn)):
        bad = _closure_violation(frame, t)
        if bad:
            raise NotAClosureOperator(f"{name} is not {bad}", witness=(name, bad))
    return EMOrder(frame, _em_table(frame, up, dn))


def _em_table(frame, up, dn):
    """U ⪯ V iff U ⊑ ↓V and V ⊑ ↑U."""
    leq = frame.leq
    return leq[:, dn] & leq[np.arange(frame.n)[None, :], up[:, None]]


def em_cones(o):
    f = o.frame
    up = [f.join_all(np.flatnonzero(o.leq[u, :])) for u in range(f.n)]
    dn = [f.join_all(np.flatnonzero(o.leq[:, u])) for u in range(f.n)]
    return np.array(up, dtype=np.int64), np.array(dn, dtype=np.int64)


def _bisimulation_holds(o):
    f = o.frame
    leq, em = f.leq, o.leq
    n = f.n
    for u in range(n):
        for v in range(n):
            if not leq[u, v]:
                continue
            for v2 in np.flatnonzero(em[v]):
                # U ⊑ V ⪯ V'  ⇒  ∃U': U ⪯ U' ⊑ V'
                if not (em[u] & leq[:, v2]).any():
                    return False
    for u2 in range(n):
        for v2 in range(n):
            if not leq[u2, v2]:
                continue
            for v in np.flatnonzero(em[:, v2]):
                # U' ⊑ V', V ⪯ V'  ⇒  ∃U: U ⪯ U', U ⊑ V
                if not (em[:, u2] & leq[:, v]).any():
                    return False
    return True


def em_respects_meets(o):
    """Bisimulation squares, cross-checked against 'determined by cones and parallel'."""
    direct = _bisimulation_holds(o)
    up, dn = em_cones(o)
    f = o.frame
    determined = np.array_equal(o.leq, _em_table(f, up, dn))
    x, _, _ = _kernels.parallel_violation(up, dn, f.meet, f.leq_u8)
    via_cones = determined and x < 0
    if direct != via_cones:
        raise InternalInvariantViolation("bisimulation and cone criteria disagree")
    return direct


def em_isomorphism_suite(frames):
    """Round trips cones -> ⪯ -> cones and ⪯ -> cones -> ⪯ on monadic conic frames."""
    results = []
    for frame in frames:
        for c in enumerate_conic_structures(frame):
            flags = cone_properties(c)
            if not (flags["inflationary"] and flags["subidempotent"]):
                continue
            o = em_order_from_monads(frame, c.up, c.dn)
            up, dn = em_cones(o)
            first = bool(np.array_equal(up, c.up.table) and np.array_equal(dn, c.dn.table))
            again = em_order_from_monads(frame, up, dn)
            second = again == o
            back = ConicFrame(frame, up, dn)
            results.append({
                "frame": frame,
                "cones": c.key(),
                "cones_roundtrip": first,
                "order_roundtrip": second and back == c,
                "respects_meets": em_respects_meets(o),
            })
    return results

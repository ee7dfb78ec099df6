"""Reference kernels in pure Python (with numpy for the table scans).

Every function here has a twin in ``_ckernels.pyx`` with the same signature
and the same scan order, so witnesses agree between backends.  Tables are
``int64`` arrays, orders are ``uint8`` matrices, bitsets are ``uint64``.
"""
from __future__ import annotations

import numpy as np

NO_WITNESS = (-1, -1)


def saturate_bits(starts, src, dst):
    """Least fixpoint of ``e -> e | dst[i]`` whenever ``src[i] <= e``, per start.

    Works on Python ints, so any bit width is accepted.
    """
    src = [int(s) for s in src]
    dst = [int(t) for t in dst]
    rules = list(zip(src, dst))
    out = []
    for e in starts:
        e = int(e)
        changed = True
        while changed:
            changed = False
            for s, t in rules:
                if s & ~e == 0 and t & ~e:
                    e |= t
                    changed = True
        out.append(e)
    return out


def left_adjoint(g, leq_p, meet_q, top_q):
    # f(x) = meet of all y with x <= g(y)
    n_p = leq_p.shape[0]
    out = np.empty(n_p, dtype=np.int64)
    for x in range(n_p):
        acc = top_q
        for y in np.flatnonzero(leq_p[x, g]):
            acc = meet_q[acc, y]
        out[x] = acc
    return out


def right_adjoint(f, leq_q, join_p, bot_p):
    # g(y) = join of all x with f(x) <= y
    n_q = leq_q.shape[0]
    out = np.empty(n_q, dtype=np.int64)
    for y in range(n_q):
        acc = bot_p
        for x in np.flatnonzero(leq_q[f, y]):
            acc = join_p[acc, x]
        out[y] = acc
    return out


def _first(mask):
    hits = np.argwhere(mask)
    if len(hits) == 0:
        return NO_WITNESS
    return tuple(int(v) for v in hits[0])


def adjunction_violation(f, g, leq_p, leq_q):
    """First (x, y) where f(x) <= y and x <= g(y) disagree."""
    lhs = leq_q[f].astype(bool)
    rhs = leq_p[:, g].astype(bool)
    return _first(lhs != rhs)


def frobenius_violation(shriek, inv, meet_src, meet_dst):
    """First (U, V) with shriek(U & inv V) != shriek(U) & V."""
    lhs = shriek[meet_src[:, inv]]
    rhs = meet_dst[shriek, :]
    return _first(lhs != rhs)


def preserve_violation(table, op_dom, op_cod):
    """First (x, y) with table[op(x, y)] != op(table[x], table[y])."""
    lhs = table[op_dom]
    rhs = op_cod[np.ix_(table, table)]
    return _first(lhs != rhs)


def parallel_violation(up, dn, meet, leq):
    """First (x, y, law) breaking one of the two parallel laws, law in {0, 1}."""
    n = meet.shape[0]
    idx = np.arange(n)
    a = meet[up][:, idx]                     # up x & y
    b = up[meet[idx[:, None], dn[None, :]]]  # up(x & dn y)
    bad0 = leq[a, b] == 0
    c = meet[idx[:, None], dn[None, :]]      # x & dn y
    d = dn[meet[up][:, idx]]                 # dn(up x & y)
    bad1 = leq[c, d] == 0
    for x in range(n):
        row = np.flatnonzero(bad0[x] | bad1[x])
        if len(row):
            y = int(row[0])
            return (x, y, 0 if bad0[x, y] else 1)
    return (-1, -1, -1)


def distributivity_violation(meet, join):
    """First (x, y, z) with x & (y | z) != (x & y) | (x & z)."""
    n = meet.shape[0]
    for x in range(n):
        lhs = meet[x][join]
        mx = meet[x]
        rhs = join[np.ix_(mx, mx)]
        bad = np.argwhere(lhs != rhs)
        if len(bad):
            return (x, int(bad[0][0]), int(bad[0][1]))
    return (-1, -1, -1)

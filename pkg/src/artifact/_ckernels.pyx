# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled twins of the kernels in ``_pykernels``.

Bitset saturation here is restricted to at most 64 points (``uint64``);
the dispatcher in ``_kernels`` routes wider frames to the Python path.
"""
import numpy as np
cimport numpy as cnp
from libc.stdint cimport int64_t, uint64_t, uint8_t

cnp.import_array()


def saturate_bits(starts, src, dst):
    cdef const uint64_t[::1] st = np.ascontiguousarray(starts, dtype=np.uint64)
    cdef const uint64_t[::1] s = np.ascontiguousarray(src, dtype=np.uint64)
    cdef const uint64_t[::1] t = np.ascontiguousarray(dst, dtype=np.uint64)
    cdef Py_ssize_t n = st.shape[0], m = s.shape[0], k, i
    out_arr = np.empty(n, dtype=np.uint64)
    cdef uint64_t[::1] out = out_arr
    cdef uint64_t e
    cdef bint changed
    with nogil:
        for k in range(n):
            e = st[k]
            changed = True
            while changed:
                changed = False
                for i in range(m):
                    if (s[i] & ~e) == 0 and (t[i] & ~e) != 0:
                        e |= t[i]
                        changed = True
            out[k] = e
    return [int(v) for v in out_arr]


def left_adjoint(g_in, leq_p_in, meet_q_in, int64_t top_q):
    cdef const int64_t[::1] g = np.ascontiguousarray(g_in, dtype=np.int64)
    cdef const uint8_t[:, ::1] leq_p = np.ascontiguousarray(leq_p_in, dtype=np.uint8)
    cdef const int64_t[:, ::1] meet_q = np.ascontiguousarray(meet_q_in, dtype=np.int64)
    cdef Py_ssize_t n_p = leq_p.shape[0], n_q = g.shape[0], x, y
    out_arr = np.empty(n_p, dtype=np.int64)
    cdef int64_t[::1] out = out_arr
    cdef int64_t acc
    with nogil:
        for x in range(n_p):
            acc = top_q
            for y in range(n_q):
                if leq_p[x, g[y]]:
                    acc = meet_q[acc, y]
            out[x] = acc
    return out_arr


def right_adjoint(f_in, leq_q_in, join_p_in, int64_t bot_p):
    cdef const int64_t[::1] f = np.ascontiguousarray(f_in, dtype=np.int64)
    cdef const uint8_t[:, ::1] leq_q = np.ascontiguousarray(leq_q_in, dtype=np.uint8)
    cdef const int64_t[:, ::1] join_p = np.ascontiguousarray(join_p_in, dtype=np.int64)
    cdef Py_ssize_t n_q = leq_q.shape[0], n_p = f.shape[0], x, y
    out_arr = np.empty(n_q, dtype=np.int64)
    cdef int64_t[::1] out = out_arr
    cdef int64_t acc
    with nogil:
        for y in range(n_q):
            acc = bot_p
            for x in range(n_p):
                if leq_q[f[x], y]:
                    acc = join_p[acc, x]
            out[y] = acc
    return out_arr


def adjunction_violation(f_in, g_in, leq_p_in, leq_q_in):
    cdef const int64_t[::1] f = np.ascontiguousarray(f_in, dtype=np.int64)
    cdef const int64_t[::1] g = np.ascontiguousarray(g_in, dtype=np.int64)
    cdef const uint8_t[:, ::1] leq_p = np.ascontiguousarray(leq_p_in, dtype=np.uint8)
    cdef const uint8_t[:, ::1] leq_q = np.ascontiguousarray(leq_q_in, dtype=np.uint8)
    cdef Py_ssize_t n_p = f.shape[0], n_q = g.shape[0], x, y
    for x in range(n_p):
        for y in range(n_q):
            if (leq_q[f[x], y] != 0) != (leq_p[x, g[y]] != 0):
                return (x, y)
    return (-1, -1)


def frobenius_violation(shriek_in, inv_in, meet_src_in, meet_dst_in):
    cdef const int64_t[::1] sh = np.ascontiguousarray(shriek_in, dtype=np.int64)
    cdef const int64_t[::1] inv = np.ascontiguousarray(inv_in, dtype=np.int64)
    cdef const int64_t[:, ::1] ms = np.ascontiguousarray(meet_src_in, dtype=np.int64)
    cdef const int64_t[:, ::1] md = np.ascontiguousarray(meet_dst_in, dtype=np.int64)
    cdef Py_ssize_t n_s = sh.shape[0], n_d = inv.shape[0], u, v
    for u in range(n_s):
        for v in range(n_d):
            if sh[ms[u, inv[v]]] != md[sh[u], v]:
                return (u, v)
    return (-1, -1)


def preserve_violation(table_in, op_dom_in, op_cod_in):
    cdef const int64_t[::1] t = np.ascontiguousarray(table_in, dtype=np.int64)
    cdef const int64_t[:, ::1] od = np.ascontiguousarray(op_dom_in, dtype=np.int64)
    cdef const int64_t[:, ::1] oc = np.ascontiguousarray(op_cod_in, dtype=np.int64)
    cdef Py_ssize_t n = t.shape[0], x, y
    for x in range(n):
        for y in range(n):
            if t[od[x, y]] != oc[t[x], t[y]]:
                return (x, y)
    return (-1, -1)


def parallel_violation(up_in, dn_in, meet_in, leq_in):
    cdef const int64_t[::1] up = np.ascontiguousarray(up_in, dtype=np.int64)
    cdef const int64_t[::1] dn = np.ascontiguousarray(dn_in, dtype=np.int64)
    cdef const int64_t[:, ::1] meet = np.ascontiguousarray(meet_in, dtype=np.int64)
    cdef const uint8_t[:, ::1] leq = np.ascontiguousarray(leq_in, dtype=np.uint8)
    cdef Py_ssize_t n = up.shape[0], x, y
    cdef int64_t a, b
    for x in range(n):
        for y in range(n):
            a = meet[up[x], y]
            b = meet[x, dn[y]]
            if not leq[a, up[b]]:
                return (x, y, 0)
            if not leq[b, dn[a]]:
                return (x, y, 1)
    return (-1, -1, -1)


def distributivity_violation(meet_in, join_in):
    cdef const int64_t[:, ::1] meet = np.ascontiguousarray(meet_in, dtype=np.int64)
    cdef const int64_t[:, ::1] join = np.ascontiguousarray(join_in, dtype=np.int64)
    cdef Py_ssize_t n = meet.shape[0], x, y, z
    for x in range(n):
        for y in range(n):
            for z in range(n):
                if meet[x, join[y, z]] != join[meet[x, y], meet[x, z]]:
                    return (x, y, z)
    return (-1, -1, -1)

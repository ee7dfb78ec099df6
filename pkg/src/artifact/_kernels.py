"""Kernel dispatch: compiled kernels when built, pure Python otherwise.

Set ``LOCALEREL_PURE_PYTHON=1`` to force the fallback.  ``use_backend`` swaps
the backend for the current context only (tests and the benchmark use it).
"""
from __future__ import annotations

import contextlib
import contextvars
import os

from . import _pykernels

try:  # pragma: no cover - depends on the build
    from . import _ckernels
except ImportError:  # pragma: no cover
    _ckernels = None

BACKENDS = {"python": _pykernels}
if _ckernels is not None:
    BACKENDS["compiled"] = _ckernels

if os.environ.get("LOCALEREL_PURE_PYTHON") or _ckernels is None:
    DEFAULT = "python"
else:
    DEFAULT = "compiled"

_active = contextvars.ContextVar("localerel_backend", default=DEFAULT)


def available():
    return sorted(BACKENDS)


def active():
    return _active.get()


@contextlib.contextmanager
def use_backend(name):
    if name not in BACKENDS:
        raise ValueError(f"unknown kernel backend {name!r}; have {available()}")
    token = _active.set(name)
    try:
        yield BACKENDS[name]
    finally:
        _active.reset(token)


def _impl():
    return BACKENDS[_active.get()]


def saturate_bits(starts, src, dst, width):
    """Saturate each start bitset; ``width`` is the number of points."""
    if width > 64:
        return _pykernels.saturate_bits(starts, src, dst)
    return _impl().saturate_bits(starts, src, dst)


def left_adjoint(g, leq_p, meet_q, top_q):
    return _impl().left_adjoint(g, leq_p, meet_q, top_q)


def right_adjoint(f, leq_q, join_p, bot_p):
    return _impl().right_adjoint(f, leq_q, join_p, bot_p)


def adjunction_violation(f, g, leq_p, leq_q):
    return _impl().adjunction_violation(f, g, leq_p, leq_q)


def frobenius_violation(shriek, inv, meet_src, meet_dst):
    return _impl().frobenius_violation(shriek, inv, meet_src, meet_dst)


def preserve_violation(table, op_dom, op_cod):
    return _impl().preserve_violation(table, op_dom, op_cod)


def parallel_violation(up, dn, meet, leq):
    return _impl().parallel_violation(up, dn, meet, leq)


def distributivity_violation(meet, join):
    return _impl().distributivity_violation(meet, join)

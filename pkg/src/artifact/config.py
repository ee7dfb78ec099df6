"""The element-count cap guarding every frame materialization."""
from __future__ import annotations

import contextlib
import contextvars
import os

from .errors import SizeCapExceeded

DEFAULT_CAP = 2**20

_cap = contextvars.ContextVar("localerel_cap", default=None)


def current_cap():
    cap = _cap.get()
    if cap is not None:
        return cap
    env = os.environ.get("LOCALEREL_CAP")
    return int(env) if env else DEFAULT_CAP


@contextlib.contextmanager
def size_cap(n):
    token = _cap.set(None if n is None else int(n))
    try:
        yield
    finally:
        _cap.reset(token)


def check_cap(count, what):
    cap = current_cap()
    if count > cap:
        raise SizeCapExceeded(f"{what} needs {count} elements, cap is {cap}", witness=count)


# Dense n×n tables (order, meet, join) are allowed up to this many entries per
# element of the cap; beyond it a frame is handled through its bitsets only.
TABLE_FACTOR = 16


def check_table(n, what):
    cap = current_cap() * TABLE_FACTOR
    if n * n > cap:
        raise SizeCapExceeded(f"{what} for {n} elements needs {n * n} table entries, "
                              f"limit is {cap}", witness=n)

"""Backend selection for the scan and closure hot loops.

The compiled kernel is used when it built successfully and the field kind
supports flat tables; ``GALOISPOINTS_PURE=1`` forces the pure fallback.  The
two backends implement identical semantics and the test suite runs the scans
against both.
"""

from __future__ import annotations

import array
import importlib
import os
from types import SimpleNamespace

from . import pure

_FORCE_PURE = os.environ.get("GALOISPOINTS_PURE") == "1"
_ckernel = None
if not _FORCE_PURE:
    try:
        _ckernel = importlib.import_module("._ckernel", __name__)
    except ImportError:
        _ckernel = None

BACKEND = "c" if _ckernel is not None else "pure"


def backend_name():
    return BACKEND


def tables_for_field(K):
    """Flat table bundle consumed by the compiled kernel."""
    kinds = {"prime": 0, "tabled": 1, "generic": 2}
    t = SimpleNamespace(kind=K.kind, kind_id=kinds[K.kind], p=K.p, q=K.q)
    if K.kind == "tabled":
        t.split = K._split
        t.hi_size = K._hi_size
        t.exp = array.array("l", K._exp)
        t.log = array.array("l", K._log)
        t.add_hi = array.array("l", K._add_hi)
        t.add_lo = array.array("l", K._add_lo)
    return t


def _compiled_ok(K):
    return _ckernel is not None and K.kind in ("prime", "tabled")


def count_projective_zeros(K, terms):
    if _compiled_ok(K):
        return _ckernel.count_projective_zeros(K.kernel_tables(), list(terms))
    return pure.count_projective_zeros(K, terms)


def find_projective_zeros(K, terms, limit=None):
    if _compiled_ok(K):
        return _ckernel.find_projective_zeros(K.kernel_tables(), list(terms), limit)
    return pure.find_projective_zeros(K, terms, limit)


def closure_set(K, gens, cap):
    return pure.closure_set(K, gens, cap)


def pgl_scan(K, terms, points, cap):
    return pure.pgl_scan(K, terms, points, cap)


mat_mul3 = pure.mat_mul3
mat_canon = pure.mat_canon
mat_apply = pure.mat_apply

"""Kernel selection: compiled extension when available, pure python fallback.

Set MAASS_CERTIFY_PURE=1 to force the pure implementation.  Both expose the
same module-level API (see _kernels_py).  get_impl() returns a specific one
for tests and benchmarks.
"""

import os

from . import _kernels_py

_COMPILED_MOD = None
try:
    from . import _kernels_cy as _COMPILED_MOD  # type: ignore
except ImportError:
    _COMPILED_MOD = None

if os.environ.get("MAASS_CERTIFY_PURE"):
    impl = _kernels_py
else:
    impl = _COMPILED_MOD if _COMPILED_MOD is not None else _kernels_py

USING_COMPILED = impl is not _kernels_py


def get_impl(pure: bool):
    if pure:
        return _kernels_py
    if _COMPILED_MOD is None:
        raise ImportError("compiled kernels are not available")
    return _COMPILED_MOD


def available_impls():
    out = [("pure", _kernels_py)]
    if _COMPILED_MOD is not None:
        out.append(("compiled", _COMPILED_MOD))
    return out

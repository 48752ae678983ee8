"""Kernel selection: compiled extension when available, pure Python otherwise.

Set ``GRAPHFORGE_PURE_KERNEL=1`` to force the fallback even when the
extension is importable (useful for benchmarking and debugging).  Both
implementations consume identical random streams, so the selection never
changes results, only speed.
"""

from __future__ import annotations

import os

from . import pure

try:
    from . import _native
except ImportError:
    _native = None

_force_pure = os.environ.get("GRAPHFORGE_PURE_KERNEL", "") not in ("", "0")
_impl = pure if (_native is None or _force_pure) else _native

COMPILED = _impl is not pure

s1_run = _impl.s1_run
s2_run = _impl.s2_run


def implementations():
    """Every importable kernel implementation, as (name, module) pairs."""
    impls = [("pure", pure)]
    if _native is not None:
        impls.append(("compiled", _native))
    return impls


def kernel(strategy: str, flavor: str = "auto"):
    """Look up a kernel function by strategy name and implementation flavor."""
    if strategy not in ("s1", "s2"):
        raise ValueError(f"unknown strategy {strategy!r}")
    if flavor == "auto":
        mod = _impl
    elif flavor == "pure":
        mod = pure
    elif flavor == "compiled":
        if _native is None:
            raise RuntimeError("compiled kernel is not available")
        mod = _native
    else:
        raise ValueError(f"unknown kernel flavor {flavor!r}")
    return getattr(mod, f"{strategy}_run")

"""Backend selection for the hot inner loops.

Imports the compiled extension when available, otherwise the pure-Python
twin.  ``CHAOS_FORGE_BACKEND=python`` forces the fallback; ``compiled``
insists on the extension and raises if it cannot be imported.  The
compiled polynomial multiply packs exponents 8 bits per coordinate and
so only handles d <= 8; higher dimensions route to the Python twin
call-by-call.
"""

from __future__ import annotations

import os

from . import _speedups_py

_forced = os.environ.get("CHAOS_FORGE_BACKEND", "auto").strip().lower()
if _forced not in ("auto", "python", "compiled"):
    raise ValueError(
        f"CHAOS_FORGE_BACKEND must be auto, python, or compiled; got {_forced!r}"
    )

_impl = _speedups_py
if _forced != "python":
    try:
        from . import _speedups as _impl  # type: ignore[no-redef]
    except ImportError:
        if _forced == "compiled":
            raise
        _impl = _speedups_py

BACKEND = _impl.BACKEND

_PACK_LIMIT = 8

expectation_gaussian = _impl.expectation_gaussian
expectation_gamma = _impl.expectation_gamma


def mul_terms(a: dict, b: dict) -> dict:
    if _impl is not _speedups_py:
        for key in a:
            if len(key) > _PACK_LIMIT:
                return _speedups_py.mul_terms(a, b)
            break
    return _impl.mul_terms(a, b)

"""Kernel backend selection: compiled extension with pure-Python fallback.

The compiled module is preferred when importable. Set CATCLUST_BACKEND to
"python" or "compiled" to force a choice (forcing "compiled" raises if the
extension is unavailable).
"""

from __future__ import annotations

import os

from . import _kernel_py

_forced = os.environ.get("CATCLUST_BACKEND", "").strip().lower()

if _forced == "python":
    _impl = _kernel_py
elif _forced == "compiled":
    from . import _kernel as _impl  # noqa: F401
else:
    try:
        from . import _kernel as _impl  # type: ignore[no-redef]
    except ImportError:
        _impl = _kernel_py

BACKEND = _impl.BACKEND_NAME
run_pass = _impl.run_pass
sigmoid_weight = _impl.sigmoid_weight


def get_backend(name: str | None = None):
    """Return the kernel module for `name` ("compiled", "python" or None
    for the import-time default)."""
    if name in (None, "", "auto"):
        return _impl
    if name == "python":
        return _kernel_py
    if name == "compiled":
        from . import _kernel
        return _kernel
    raise ValueError(f"unknown backend {name!r}")

"""Kernel backend selection.

Prefers the compiled Cython kernels when the extension built; falls back
to the pure-Python twins otherwise. Set ``HALLFORGE_PURE=1`` to force the
pure backend (used by the benchmark and the parity tests).
"""

from __future__ import annotations

import os

from hallforge import _kernels_py

if os.environ.get("HALLFORGE_PURE"):
    _impl = _kernels_py
else:
    try:
        from hallforge import _kernels as _impl  # type: ignore[no-redef]
    except ImportError:
        _impl = _kernels_py

rref = _impl.rref
matmul = _impl.matmul
is_invertible = _impl.is_invertible
count_invertible_span = _impl.count_invertible_span
find_invertible_span = _impl.find_invertible_span


def backend_name() -> str:
    return _impl.BACKEND


def pure_backend():
    """The pure-Python kernel module (for parity testing)."""
    return _kernels_py

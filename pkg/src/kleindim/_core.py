"""Kernel selection: compiled Cython extension with a NumPy fallback.

Set KLEINDIM_FORCE_PY=1 to force the fallback (used by the benchmark and
to reproduce results without a compiler).
"""

from __future__ import annotations

import os

from . import _kernels_py

HAVE_COMPILED = False
_impl = _kernels_py

if os.environ.get("KLEINDIM_FORCE_PY", "") != "1":
    try:
        from . import _kernels_c  # type: ignore[attr-defined]

        _impl = _kernels_c
        HAVE_COMPILED = True
    except ImportError:
        pass

expand = _impl.expand
canonicalize = _impl.canonicalize
displacements = _impl.displacements
KERNEL_NAME = "compiled" if HAVE_COMPILED else "numpy"

"""Kernel backend selection.

The compiled extension is preferred when importable; the numpy fallback is
bit-identical, just slower on small batches.  Set ``DYADICBM_BACKEND`` to
``numpy`` or ``compiled`` to force a choice (forcing ``compiled`` raises if
the extension is missing).
"""

import os

from . import numpy_backend

_forced = os.environ.get("DYADICBM_BACKEND")

if _forced == "numpy":
    _impl = numpy_backend
elif _forced in (None, "compiled"):
    try:
        from . import _core as _impl
    except ImportError:
        if _forced == "compiled":
            raise ImportError(
                "DYADICBM_BACKEND=compiled but the extension is not built"
            )
        _impl = numpy_backend
else:
    raise ValueError(f"unknown DYADICBM_BACKEND {_forced!r}")

BACKEND = _impl.BACKEND
uniforms = _impl.uniforms
normals = _impl.normals
build_paths = _impl.build_paths
interval_abs_max = _impl.interval_abs_max

"""Kernel backend selection.

Imports the compiled extension when available, otherwise the numpy
fallback.  Set ``PITCHKIN_PURE_PYTHON=1`` to force the fallback (used by
the benchmark to compare both).
"""

from __future__ import annotations

import os

from . import _native_py

if os.environ.get("PITCHKIN_PURE_PYTHON") == "1":
    _impl = _native_py
else:
    try:
        from . import _native as _impl  # type: ignore[no-redef]
    except ImportError:
        _impl = _native_py

BACKEND = "native" if _impl.__name__.endswith("_native") else "python"

fk_frame = _impl.fk_frame
fk_jac_frame = _impl.fk_jac_frame
bone_pass = _impl.bone_pass

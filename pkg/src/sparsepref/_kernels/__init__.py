"""Loss kernel backend selection.

The compiled extension is preferred when it imported cleanly; otherwise the
NumPy fallback is used. Setting SPARSEPREF_PURE=1 before import forces the
fallback, which is how the benchmark and the agreement tests reach both
implementations in one process (the pure module stays importable directly).
"""

from __future__ import annotations

import os

from . import pure

BACKEND = "pure"
_impl = pure

if os.environ.get("SPARSEPREF_PURE", "") != "1":
    try:
        from . import _core as _impl  # type: ignore[no-redef]

        BACKEND = "compiled"
    except ImportError:
        pass

nll_value = _impl.nll_value
nll_value_grad = _impl.nll_value_grad


def backend_name() -> str:
    return BACKEND

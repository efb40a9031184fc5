"""Backend selection for the hot scan kernels.

The compiled extension is used when it was built; otherwise the pure-Python
module is loaded. Set ``JUMPGREEDY_PURE_PYTHON=1`` to force the fallback.
"""

import os

from jumpgreedy import _pykernels

if os.environ.get("JUMPGREEDY_PURE_PYTHON", "") not in ("", "0"):
    _impl = _pykernels
else:
    try:
        from jumpgreedy import _ckernels as _impl
    except ImportError:  # extension not built
        _impl = _pykernels

BACKEND = "cython" if _impl is not _pykernels else "python"

jexc_scan = _impl.jexc_scan
exchange_scan = _impl.exchange_scan

BACKENDS = {"python": _pykernels}
if BACKEND == "cython":
    BACKENDS["cython"] = _impl
else:
    try:
        from jumpgreedy import _ckernels

        BACKENDS["cython"] = _ckernels
    except ImportError:
        pass

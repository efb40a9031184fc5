import os
import subprocess
import sys

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from jumpgreedy import kernels
from jumpgreedy.delta_matroid import DeltaMatroid, verify_symmetric_exchange

needs_ext = pytest.mark.skipif("cython" not in kernels.BACKENDS, reason="compiled kernels not built")


def backend_in_subprocess(env_value):
    env = dict(os.environ)
    env.pop("JUMPGREEDY_PURE_PYTHON", None)
    if env_value is not None:
        env["JUMPGREEDY_PURE_PYTHON"] = env_value
    r = subprocess.run(
        [sys.executable, "-c", "import jumpgreedy; print(jumpgreedy.BACKEND)"],
        capture_output=True, text=True, env=env, check=True,
    )
    return r.stdout.strip()


def test_fallback_can_be_forced():
    assert backend_in_subprocess("1") == "python"


@needs_ext
def test_extension_selected_by_default():
    assert backend_in_subprocess(None) == "cython"
    assert backend_in_subprocess("0") == "cython"


@needs_ext
@settings(max_examples=200, deadline=None)
@given(st.integers(1, 4), st.data())
def test_exchange_scan_agrees(n, data):
    fam = data.draw(st.sets(st.integers(0, (1 << n) - 1), min_size=1))
    D = DeltaMatroid(n, tuple(fam))
    assert verify_symmetric_exchange(D, kernels.BACKENDS["python"]) == verify_symmetric_exchange(D, kernels.BACKENDS["cython"])


@needs_ext
def test_jexc_scan_raw_arrays():
    # {(0,0), (3,0)} in box offsets: the scan reports rows (0, 1), coordinate 0, sign +1
    grid = np.array([1, 0, 0, 1], dtype=np.uint8)
    pts = np.array([[0, 0], [3, 0]], dtype=np.int64)
    strides = np.array([1, 1], dtype=np.int64)
    for b in kernels.BACKENDS.values():
        assert tuple(b.jexc_scan(grid, pts, strides)) == (0, 1, 0, 1)

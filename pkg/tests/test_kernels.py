"""The compiled kernels agree with the pure-Python reference bit for bit."""
import numpy as np
import pytest
from hypothesis import given, strategies as st

from impcomp import kernels
from impcomp.order import derive_heyting

from conftest import closure_lattices, distributive_lattices

pytestmark = pytest.mark.skipif(kernels.compiled is None, reason="compiled kernels not built")


def _same(a, b):
    assert np.array_equal(np.asarray(a), np.asarray(b))


@given(closure_lattices(), st.integers(0, 2**32 - 1))
def test_parity_on_arbitrary_tables(L, seed):
    # the kernels only index into the tables, so any table in range exercises them
    rng = np.random.default_rng(seed)
    n = L.n
    imp = rng.integers(0, n, size=(n, n)).astype(np.int64)
    meet = L.meet_table
    for k in (kernels.pure, kernels.compiled):
        assert k is not None
    _same(kernels.pure.app_table(L.leq, imp, meet, L.top), kernels.compiled.app_table(L.leq, imp, meet, L.top))
    _same(kernels.pure.encoded_meet_table(imp, meet, L.top), kernels.compiled.encoded_meet_table(imp, meet, L.top))
    _same(kernels.pure.subset_folds(meet, L.top, n), kernels.compiled.subset_folds(meet, L.top, n))
    sm = kernels.pure.subset_folds(meet, L.top, n)
    sj = kernels.pure.subset_folds(L.join_table, L.bottom, n)
    _same(kernels.pure.meet_distribution_violations(imp, meet, sm, n),
          kernels.compiled.meet_distribution_violations(imp, meet, sm, n))
    _same(kernels.pure.joins_violations(imp, meet, sj, n, L.top),
          kernels.compiled.joins_violations(imp, meet, sj, n, L.top))
    _same(kernels.pure.exists_all(imp, meet, L.top, n), kernels.compiled.exists_all(imp, meet, L.top, n))
    body = rng.integers(0, n, size=(n, 3)).astype(np.int64)
    _same(kernels.pure.lam_reduce(imp, meet, L.top, body), kernels.compiled.lam_reduce(imp, meet, L.top, body))
    weights = rng.integers(0, n, size=(2, 3)).astype(np.int64)
    _same(kernels.pure.map_witnesses(weights, meet, L.top), kernels.compiled.map_witnesses(weights, meet, L.top))
    masks = rng.integers(0, 2**n, size=n).astype(np.uint64)
    _same(kernels.pure.subset_and(masks, n), kernels.compiled.subset_and(masks, n))


@given(distributive_lattices())
def test_parity_on_heyting_tables(L):
    A = derive_heyting(L)
    imp, meet = np.asarray(A.imp), L.meet_table
    _same(kernels.pure.exists_all(imp, meet, L.top, L.n), kernels.compiled.exists_all(imp, meet, L.top, L.n))
    _same(kernels.pure.app_table(L.leq, imp, meet, L.top), kernels.compiled.app_table(L.leq, imp, meet, L.top))


def test_backend_flag():
    assert kernels.BACKEND in ("cython", "python")


def test_pure_backend_selected_by_environment():
    import subprocess
    import sys
    out = subprocess.run([sys.executable, "-c", "from impcomp import kernels; print(kernels.BACKEND)"],
                         env={"IMPCOMP_PURE": "1", "PATH": ""}, capture_output=True, text=True, check=True)
    assert out.stdout.strip() == "python"

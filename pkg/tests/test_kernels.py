import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from qutritbraid import _kernels
from qutritbraid.cyclo import cyclotomic_field
from qutritbraid.groups import closure, catalog_matrix

F72 = cyclotomic_field(72)
MOD = np.array(F72.modulus, dtype=np.int64)


@pytest.fixture
def backend():
    old = _kernels.get_backend()
    yield _kernels.set_backend
    _kernels.set_backend(old)


def batch(seed, k=6, d=3, scale=50):
    rng = np.random.default_rng(seed)
    num = rng.integers(-scale, scale, size=(k, d, d, F72.phi), dtype=np.int64)
    den = rng.integers(1, 30, size=k, dtype=np.int64)
    return _kernels.normalize_batch(num, den)


@settings(max_examples=15, deadline=None)
@given(st.integers(0, 10_000))
def test_backends_agree(seed):
    a, ad = batch(seed)
    b, bd = batch(seed + 1)
    _kernels.set_backend("numba")
    x, xd = _kernels.matmul_batch(a, ad, b, bd, MOD)
    _kernels.set_backend("numpy")
    y, yd = _kernels.matmul_batch(a, ad, b, bd, MOD)
    _kernels.set_backend("numba")
    assert np.array_equal(x, y) and np.array_equal(xd, yd)


def test_object_path_matches_python_ints():
    a, ad = batch(3, k=2, scale=2**40)
    b, bd = batch(4, k=2, scale=2**40)
    x, xd = _kernels.matmul_batch(a, ad, b, bd, MOD)
    assert x.dtype == object
    small_a, sad = batch(5, k=2)
    small_b, sbd = batch(6, k=2)
    y, yd = _kernels.matmul_batch(small_a.astype(object), sad, small_b.astype(object), sbd, MOD)
    z, zd = _kernels.matmul_batch(small_a, sad, small_b, sbd, MOD)
    assert y.dtype == np.int64
    assert np.array_equal(y, z) and np.array_equal(yd, zd)


def test_keys_agree_across_dtypes():
    a, ad = batch(7, k=3)
    assert _kernels.keys_for(a, ad) == _kernels.keys_for(a.astype(object), ad.astype(object))


def test_set_backend_rejects_unknown(backend):
    with pytest.raises(ValueError):
        backend("fortran")


def test_closure_same_under_both_backends(backend):
    gens = [catalog_matrix("G1"), catalog_matrix("G2")]
    backend("numba")
    a = closure(gens)
    backend("numpy")
    b = closure(gens)
    assert a.order == b.order == 162
    assert a.keys == b.keys

"""The compiled and pure-Python kernels must agree."""

import numpy as np
import pytest

from ratedist import _backend, _pykernels
from ratedist.codes import weight_probs
from ratedist.info import hamming_matrix

compiled = pytest.importorskip("ratedist._kernels")


def test_backend_switch():
    assert _backend.current() in _backend.available()
    prev = _backend.use_backend("python")
    assert _backend.kernels is _pykernels
    _backend.use_backend(prev)
    with pytest.raises(ValueError):
        _backend.use_backend("fortran")


@pytest.mark.parametrize("s", [0.0, 0.4, 2.0, 15.0])
def test_ba_parity(s):
    src = np.array([0.7, 0.3])
    a = compiled.ba_iterate(src, hamming_matrix(), s, 1e-12, 10000)
    b = _pykernels.ba_iterate(src, hamming_matrix(), s, 1e-12, 10000)
    assert len(a[0]) == len(b[0])
    for x, y in zip(a[:5], b[:5]):
        np.testing.assert_allclose(np.asarray(x), np.asarray(y), atol=1e-13)
    assert bool(a[5]) == bool(b[5])


def test_encode_parity():
    rng = np.random.default_rng(0)
    for n in (3, 7, 10):
        cb = np.array(sorted(rng.choice(2**n, 5, replace=False)), dtype=np.uint64)
        a, b = compiled.encode_all(cb, n), _pykernels.encode_all(cb, n)
        np.testing.assert_array_equal(np.asarray(a[0]), np.asarray(b[0]))
        np.testing.assert_array_equal(np.asarray(a[1]), np.asarray(b[1]))


@pytest.mark.parametrize("n, M, t, excess", [(3, 4, 0, False), (4, 3, 1, True), (4, 5, 0, False)])
def test_search_parity(n, M, t, excess):
    pw = weight_probs(0.3, n)
    a = compiled.search_codes(pw, n, M, t, excess)
    b = _pykernels.search_codes(pw, n, M, t, excess)
    assert [int(w) for w in a[0]] == [int(w) for w in b[0]]
    assert a[1] == b[1]


def test_mc_parity():
    args = (0.3, 0.25, 20, 32, 2, 42, 0, 20_000)
    assert compiled.mc_excess_count(*args) == _pykernels.mc_excess_count(*args)
    args = (0.1, 0.5, 64, 3, 20, 5, 100, 3100)
    assert compiled.mc_excess_count(*args) == _pykernels.mc_excess_count(*args)

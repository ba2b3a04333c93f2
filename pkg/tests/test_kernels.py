import numpy as np
import pytest

from translog import kernels as K
from translog.fixtures import m2
from translog.reference import Evaluator
from translog.transitions import Transition, compose, from_row, parallel, to_row, union

BACKENDS = ["numpy"] + (["numba"] if K.HAVE_NUMBA else [])
N = 4


def random_rows(rng, n, prec_mask=None):
    A = rng.integers(1, 1 << N, size=(n, N), dtype=np.int64)
    if prec_mask is not None:
        for s in range(N):
            if not prec_mask >> s & 1:
                A[:, s] = 0
    return A


@pytest.fixture(params=BACKENDS)
def backend(request):
    with K.use_backend(request.param):
        yield request.param


def test_compose_matches_transition_algebra(backend):
    M = m2()
    rng = np.random.default_rng(0)
    A = random_rows(rng, 20, 0b0101)
    B = random_rows(rng, 15)
    out = K.compose_all(A, B)
    assert out.shape == (300, N)
    for i in range(len(A)):
        t1 = from_row(M, A[i])
        for j in range(len(B)):
            t2 = from_row(M, B[j])
            t2 = Transition({s: t2(s) for s in t1.post})
            assert from_row(M, out[i * len(B) + j]) == compose(t1, t2)


def test_union_matches_transition_algebra(backend):
    M = m2()
    rng = np.random.default_rng(1)
    A, B = random_rows(rng, 10, 0b0011), random_rows(rng, 10, 0b0110)
    out = K.union_all(A, B)
    for i in range(10):
        for j in range(10):
            assert from_row(M, out[i * 10 + j]) == union(from_row(M, A[i]), from_row(M, B[j]))


def test_parallel_matches_transition_algebra(backend):
    M = m2()
    ev = Evaluator(M)
    merge = ev.reference.merge_table({"x"}, {"y"})
    rng = np.random.default_rng(2)
    A, B = random_rows(rng, 8, 0b1001), random_rows(rng, 8, 0b1001)
    out = K.parallel_all(A, B, merge)
    for i in range(8):
        for j in range(8):
            expected = parallel(from_row(M, A[i]), from_row(M, B[j]), ("x",), ("y",))
            assert from_row(M, out[i * 8 + j]) == expected


def test_independent_mask(backend):
    A = np.array([[1, 0, 1, 0], [1, 0, 2, 0], [3, 3, 3, 3]], dtype=np.int64)
    pairs = np.array([[0, 2]])
    assert K.independent_mask(A, pairs).tolist() == [True, False, True]
    assert K.independent_mask(A, np.zeros((0, 2))).tolist() == [True] * 3


def test_or_product(backend):
    assert K.or_product([1, 2], [4, 1]).tolist() == [1, 3, 5, 6]
    assert K.or_product([], [1]).tolist() == []


def test_product_rows(backend):
    out = K.product_rows([0, 2], [[1, 2], [4, 8, 12]], N)
    assert out.shape == (6, N)
    assert {tuple(r) for r in out} == {(a, 0, b, 0) for a in (1, 2) for b in (4, 8, 12)}
    assert K.product_rows([], [], N).tolist() == [[0] * N]
    assert len(K.product_rows([0], [[]], N)) == 0


@pytest.mark.skipif(not K.HAVE_NUMBA, reason="numba not installed")
def test_backends_agree_on_random_inputs():
    rng = np.random.default_rng(5)
    merge = Evaluator(m2()).reference.merge_table({"x"}, {"y"})
    for _ in range(20):
        A, B = random_rows(rng, 30), random_rows(rng, 30)
        results = {}
        for name in ("numpy", "numba"):
            with K.use_backend(name):
                results[name] = (
                    K.compose_all(A, B),
                    K.union_all(A, B),
                    K.parallel_all(A, B, merge),
                    K.or_product(A[:, 0], B[:, 1]),
                )
        for a, b in zip(results["numpy"], results["numba"]):
            assert np.array_equal(a, b)


def test_unique_rows_is_lexicographic():
    rng = np.random.default_rng(9)
    A = rng.integers(0, 16, size=(200, N), dtype=np.int64)
    assert np.array_equal(K.unique_rows(A), np.unique(A, axis=0))
    wide = rng.integers(0, 1 << 9, size=(50, 9), dtype=np.int64)
    assert np.array_equal(K.unique_rows(wide), np.unique(wide, axis=0))


def test_mask_helpers():
    assert K.mask_bits(0b1011) == [0, 1, 3]
    assert sorted(K.submasks(0b101)) == [0, 1, 4, 5]
    assert sorted(K.nonempty_submasks(0b11)) == [1, 2, 3]
    assert K.posts(np.array([[1, 4, 0, 0], [0, 0, 2, 2]])).tolist() == [5, 2]


def test_set_backend_validates():
    with pytest.raises(ValueError):
        K.set_backend("cuda")


def test_to_row_layout():
    M = m2()
    s = M.assignment(x=0, y=1)
    t = Transition({s: {M.assignment(x=1, y=1)}})
    assert to_row(M, t).tolist() == [0, 1 << 3, 0, 0]

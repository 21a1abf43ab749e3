import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from rotated_tcf.zq import (bit_dot, bit_matvec_mod, bits_le, bits_le_vec,
                            centered_abs, centered_lift, from_bits_le,
                            gadget_matrix, inf_norm, inner_mod, matvec_mod,
                            mul_mod_schoolbook, mul_mod_widened,
                            vecmat_bits_mod)

BIG_Q = (1 << 61) - 1  # Mersenne prime, the largest supported modulus


def test_centered_abs_example():
    assert int(centered_abs(5, 7)) == 2
    assert int(centered_abs(2, 7)) == 2
    assert int(centered_abs(0, 7)) == 0


def test_inf_norm_example():
    v = np.array([6, 5, 10], dtype=np.int64)
    assert inf_norm(v, 11) == 5


def test_inf_norm_empty_rejected():
    with pytest.raises(ValueError):
        inf_norm(np.array([], dtype=np.int64), 7)


def test_centered_lift_range():
    q = 13
    x = np.arange(q)
    lifted = centered_lift(x, q)
    assert lifted.min() == -(q // 2)
    assert lifted.max() == q // 2
    assert np.array_equal(lifted % q, x)


def test_bits_le_example():
    assert bits_le(3, 3).tolist() == [1, 1, 0]
    assert from_bits_le([1, 1, 0]) == 3


def test_bits_le_overflow_rejected():
    with pytest.raises(ValueError):
        bits_le(8, 3)


def test_bits_le_vec_concatenates():
    x = np.array([3, 1], dtype=np.int64)
    assert bits_le_vec(x, 3).tolist() == [1, 1, 0, 1, 0, 0]


def test_gadget_matrix_example():
    G = gadget_matrix(2, 2, 5)
    assert G.tolist() == [[1, 0], [2, 0], [0, 1], [0, 2]]


def test_gadget_matrix_reduces_mod_q():
    G = gadget_matrix(1, 4, 11)
    assert G[:, 0].tolist() == [1, 2, 4, 8]
    G = gadget_matrix(1, 4, 13)
    assert G[3, 0] == 8 % 13


def test_inner_mod_exact():
    u = np.array([4, 3], dtype=np.int64)
    v = np.array([2, 1], dtype=np.int64)
    assert inner_mod(u, v, 5) == (4 * 2 + 3 * 1) % 5


def test_inner_mod_no_overflow():
    u = np.full(100, BIG_Q - 1, dtype=np.int64)
    assert inner_mod(u, u, BIG_Q) == 100 * (BIG_Q - 1) ** 2 % BIG_Q


def test_mul_mod_implementations_agree():
    gen = np.random.default_rng(7)
    for q in (5, 3001, (1 << 31) - 1, BIG_Q):
        n = 1_000_000 if q == BIG_Q else 10_000
        a = gen.integers(0, q, size=n, dtype=np.int64)
        b = gen.integers(0, q, size=n, dtype=np.int64)
        got = mul_mod_widened(a, b, q)
        # independent big-int reference on a deterministic subsample
        idx = gen.integers(0, n, size=2000)
        for i in idx:
            assert int(got[i]) == mul_mod_schoolbook(int(a[i]), int(b[i]), q)
        # full agreement via object-dtype arithmetic
        ref = (a.astype(object) * b.astype(object)) % q
        assert np.array_equal(got.astype(object), ref)


def test_matvec_mod_large_modulus_exact():
    gen = np.random.default_rng(11)
    q = BIG_Q
    A = gen.integers(0, q, size=(8, 6), dtype=np.int64)
    x = gen.integers(0, q, size=6, dtype=np.int64)
    ref = (A.astype(object) @ x.astype(object)) % q
    assert np.array_equal(matvec_mod(A, x, q).astype(object), ref)


def test_matvec_mod_shape_check():
    with pytest.raises(ValueError):
        matvec_mod(np.zeros((2, 3), dtype=np.int64),
                   np.zeros(2, dtype=np.int64), 7)


def test_bit_matvec_and_vecmat():
    gen = np.random.default_rng(3)
    q = BIG_Q
    B = gen.integers(0, 2, size=(5, 9), dtype=np.int64)
    x = gen.integers(0, q, size=9, dtype=np.int64)
    ref = (B.astype(object) @ x.astype(object)) % q
    assert np.array_equal(bit_matvec_mod(B, x, q).astype(object), ref)
    A = gen.integers(0, q, size=(9, 4), dtype=np.int64)
    f = gen.integers(0, 2, size=9, dtype=np.int64)
    ref = (f.astype(object) @ A.astype(object)) % q
    assert np.array_equal(vecmat_bits_mod(f, A, q).astype(object), ref)


def test_bit_dot():
    assert bit_dot(np.array([1, 0, 1]), np.array([1, 1, 1])) == 0
    assert bit_dot(np.array([1, 0, 1]), np.array([1, 1, 0])) == 1
    with pytest.raises(ValueError):
        bit_dot(np.array([1]), np.array([1, 0]))


@given(st.integers(min_value=0, max_value=3000))
def test_centered_abs_symmetry(x):
    q = 3001
    assert int(centered_abs(x, q)) == int(centered_abs((q - x) % q, q))


@given(st.integers(min_value=0, max_value=(1 << 40) - 1),
       st.integers(min_value=40, max_value=50))
def test_bits_roundtrip(x, Q):
    assert from_bits_le(bits_le(x, Q)) == x


@settings(max_examples=200, deadline=None)
@given(st.integers(min_value=0, max_value=2 ** 32))
def test_matvec_distributes(seed):
    gen = np.random.default_rng(seed)
    q = 4398046511119
    A = gen.integers(0, q, size=(4, 3), dtype=np.int64)
    x = gen.integers(0, q, size=3, dtype=np.int64)
    y = gen.integers(0, q, size=3, dtype=np.int64)
    lhs = matvec_mod(A, (x + y) % q, q)
    rhs = (matvec_mod(A, x, q) + matvec_mod(A, y, q)) % q
    assert np.array_equal(lhs, rhs)

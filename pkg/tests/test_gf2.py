import io

import numpy as np
import pytest

from binceo.gf2 import (
    BitSequence,
    DimensionError,
    SparseBinaryMatrix,
    concat,
    hamming_distortion,
    mat_vec_mul,
    read_alist,
    write_alist,
)
from binceo.channel import substream

from oracles import dense_mat_vec, dense_matrix


def random_sparse(rows, cols, rng, max_deg=4):
    adj = []
    for _ in range(rows):
        deg = int(rng.integers(1, max_deg + 1))
        adj.append(tuple(sorted(rng.choice(cols, size=deg, replace=False).tolist())))
    return SparseBinaryMatrix(rows, cols, tuple(adj))


def test_bitsequence_basics():
    b = BitSequence(np.array([1, 0, 1, 1], dtype=np.uint8))
    assert len(b) == 4
    assert b == BitSequence(np.array([1, 0, 1, 1], dtype=np.uint8))
    assert b != BitSequence(np.array([1, 0, 1, 0], dtype=np.uint8))


def test_bitsequence_rejects_non_binary():
    with pytest.raises((ValueError, DimensionError)):
        BitSequence(np.array([0, 2, 1], dtype=np.uint8))


def test_concat_roundtrip():
    rng = substream(1, 0)
    a = BitSequence(rng.integers(0, 2, 7).astype(np.uint8))
    b = BitSequence(rng.integers(0, 2, 5).astype(np.uint8))
    c = concat([a, b])
    assert len(c) == 12
    assert np.array_equal(c.bits[:7], a.bits)
    assert np.array_equal(c.bits[7:], b.bits)


def test_hamming_distortion():
    a = BitSequence(np.array([0, 0, 1, 1], dtype=np.uint8))
    b = BitSequence(np.array([0, 1, 1, 0], dtype=np.uint8))
    assert hamming_distortion(a, b) == pytest.approx(0.5)
    assert hamming_distortion(a, a) == 0.0


def test_mat_vec_mul_matches_dense_oracle():
    rng = substream(2, 0)
    for trial in range(20):
        rows = int(rng.integers(1, 30))
        cols = int(rng.integers(1, 30))
        m = random_sparse(rows, cols, rng, max_deg=min(4, cols))
        v = rng.integers(0, 2, cols).astype(np.uint8)
        got = mat_vec_mul(m, BitSequence(v)).bits
        assert np.array_equal(got, dense_mat_vec(m, v)), f"trial {trial}"


def test_mat_vec_mul_linearity():
    rng = substream(2, 1)
    m = random_sparse(25, 40, rng)
    for _ in range(10):
        a = rng.integers(0, 2, 40).astype(np.uint8)
        b = rng.integers(0, 2, 40).astype(np.uint8)
        lhs = mat_vec_mul(m, BitSequence(a ^ b)).bits
        rhs = mat_vec_mul(m, BitSequence(a)).bits ^ mat_vec_mul(m, BitSequence(b)).bits
        assert np.array_equal(lhs, rhs)


def test_mat_vec_mul_dimension_error():
    rng = substream(2, 2)
    m = random_sparse(5, 8, rng)
    with pytest.raises(DimensionError):
        mat_vec_mul(m, BitSequence(np.zeros(7, dtype=np.uint8)))


def test_transpose_matches_dense():
    rng = substream(2, 3)
    m = random_sparse(12, 20, rng)
    t = m.transpose()
    assert (t.rows, t.cols) == (20, 12)
    assert np.array_equal(dense_matrix(t), dense_matrix(m).T)


def test_alist_roundtrip():
    rng = substream(2, 4)
    m = random_sparse(10, 16, rng)
    buf = io.StringIO()
    write_alist(m, buf)
    buf.seek(0)
    back = read_alist(buf)
    assert (back.rows, back.cols) == (m.rows, m.cols)
    assert np.array_equal(dense_matrix(back), dense_matrix(m))

"""Binary sequences and sparse GF(2) matrices.

Everything downstream (codes, quantizer, decoder) works on these two types.
Values are immutable after construction so they can be shared freely across
parallel trials.
"""

from __future__ import annotations

import numpy as np
from scipy.sparse import csr_matrix


class DimensionError(ValueError):
    """Shapes of two GF(2) operands do not conform."""


class BitSequence:
    """A length-n binary word backed by a read-only uint8 vector."""

    __slots__ = ("_bits",)

    def __init__(self, bits):
        arr = np.array(bits, dtype=np.uint8, copy=True).ravel()
        if arr.size and int(arr.max(initial=0)) > 1:
            raise ValueError("bit values must be 0 or 1")
        arr.setflags(write=False)
        self._bits = arr

    @classmethod
    def zeros(cls, n: int) -> "BitSequence":
        return cls(np.zeros(int(n), dtype=np.uint8))

    @classmethod
    def from_int(cls, value: int, length: int) -> "BitSequence":
        """Big-endian (MSB-first) binary expansion of ``value`` in ``length`` bits."""
        if value < 0 or value >= (1 << length):
            raise ValueError(f"value {value} does not fit in {length} bits")
        nbytes = (length + 7) // 8
        shifted = value << ((-length) % 8)
        raw = np.frombuffer(shifted.to_bytes(nbytes, "big"), dtype=np.uint8)
        return cls(np.unpackbits(raw)[:length])

    @property
    def bits(self) -> np.ndarray:
        return self._bits

    @property
    def length(self) -> int:
        return self._bits.size

    def __len__(self) -> int:
        return self._bits.size

    def __getitem__(self, idx):
        if isinstance(idx, slice):
            return BitSequence(self._bits[idx])
        return int(self._bits[idx])

    def __xor__(self, other: "BitSequence") -> "BitSequence":
        if not isinstance(other, BitSequence):
            return NotImplemented
        if other.length != self.length:
            raise DimensionError(
                f"xor of length {self.length} with length {other.length}"
            )
        return BitSequence(self._bits ^ other._bits)

    def __eq__(self, other) -> bool:
        if not isinstance(other, BitSequence):
            return NotImplemented
        return self.length == other.length and bool(
            np.array_equal(self._bits, other._bits)
        )

    def __repr__(self) -> str:
        head = "".join(map(str, self._bits[:32]))
        suffix = "..." if self.length > 32 else ""
        return f"BitSequence({head}{suffix}, length={self.length})"

    def weight(self) -> int:
        return int(self._bits.sum())

    def to_int(self) -> int:
        """Big-endian (MSB-first) integer value; exact for any length."""
        if self.length == 0:
            return 0
        packed = np.packbits(self._bits)
        return int.from_bytes(packed.tobytes(), "big") >> ((-self.length) % 8)


def concat(parts) -> BitSequence:
    return BitSequence(np.concatenate([p.bits for p in parts]))


def hamming_distortion(a: BitSequence, b: BitSequence) -> float:
    """Fraction of positions where ``a`` and ``b`` disagree."""
    if a.length != b.length:
        raise DimensionError(
            f"hamming_distortion: lengths differ ({a.length} vs {b.length})"
        )
    if a.length == 0:
        raise DimensionError("hamming_distortion of empty sequences")
    return float(np.count_nonzero(a.bits ^ b.bits)) / a.length


class SparseBinaryMatrix:
    """Sparse GF(2) matrix with bidirectional (row and column) adjacency.

    Adjacency lists are sorted, duplicate-free and 0-based.  1-based indices
    appear only in the alist file format.
    """

    __slots__ = ("rows", "cols", "_row_adj", "_col_adj", "_csr")

    def __init__(self, rows: int, cols: int, row_adjacency):
        self.rows = int(rows)
        self.cols = int(cols)
        if self.rows <= 0 or self.cols <= 0:
            raise ValueError("matrix dimensions must be positive")
        if len(row_adjacency) != self.rows:
            raise DimensionError(
                f"expected {self.rows} adjacency lists, got {len(row_adjacency)}"
            )
        radj = []
        for r, idx in enumerate(row_adjacency):
            a = np.array(sorted(int(i) for i in idx), dtype=np.int64)
            if a.size != len(set(a.tolist())):
                raise ValueError(f"duplicate column index in row {r}")
            if a.size and (a[0] < 0 or a[-1] >= self.cols):
                raise ValueError(f"column index out of range in row {r}")
            a.setflags(write=False)
            radj.append(a)
        self._row_adj = tuple(radj)
        cadj = [[] for _ in range(self.cols)]
        for r, a in enumerate(self._row_adj):
            for c in a.tolist():
                cadj[c].append(r)
        col = []
        for lst in cadj:
            a = np.array(lst, dtype=np.int64)
            a.setflags(write=False)
            col.append(a)
        self._col_adj = tuple(col)
        self._csr = None

    @classmethod
    def from_col_adjacency(cls, rows: int, cols: int, col_adjacency):
        radj = [[] for _ in range(rows)]
        for c, lst in enumerate(col_adjacency):
            for r in lst:
                radj[int(r)].append(c)
        return cls(rows, cols, radj)

    @property
    def row_adj(self):
        return self._row_adj

    @property
    def col_adj(self):
        return self._col_adj

    def row_degrees(self) -> np.ndarray:
        return np.array([a.size for a in self._row_adj], dtype=np.int64)

    def col_degrees(self) -> np.ndarray:
        return np.array([a.size for a in self._col_adj], dtype=np.int64)

    @property
    def nnz(self) -> int:
        return int(self.row_degrees().sum())

    def to_csr(self) -> csr_matrix:
        if self._csr is None:
            indptr = np.zeros(self.rows + 1, dtype=np.int64)
            indptr[1:] = np.cumsum(self.row_degrees())
            indices = (
                np.concatenate(self._row_adj)
                if self.nnz
                else np.zeros(0, dtype=np.int64)
            )
            data = np.ones(indices.size, dtype=np.int64)
            self._csr = csr_matrix(
                (data, indices, indptr), shape=(self.rows, self.cols)
            )
        return self._csr

    def transpose(self) -> "SparseBinaryMatrix":
        t = SparseBinaryMatrix.__new__(SparseBinaryMatrix)
        t.rows = self.cols
        t.cols = self.rows
        t._row_adj = self._col_adj
        t._col_adj = self._row_adj
        t._csr = None
        return t

    def to_dense(self) -> np.ndarray:
        out = np.zeros((self.rows, self.cols), dtype=np.uint8)
        for r, a in enumerate(self._row_adj):
            out[r, a] = 1
        return out

    def __eq__(self, other) -> bool:
        if not isinstance(other, SparseBinaryMatrix):
            return NotImplemented
        return (
            self.rows == other.rows
            and self.cols == other.cols
            and all(
                np.array_equal(a, b) for a, b in zip(self._row_adj, other._row_adj)
            )
        )


def mat_vec_mul(m: SparseBinaryMatrix, v: BitSequence) -> BitSequence:
    """GF(2) matrix-vector product: w_r = XOR of v over row r's adjacency."""
    if v.length != m.cols:
        raise DimensionError(
            f"mat_vec_mul: expected vector of length {m.cols}, got {v.length}"
        )
    w = (m.to_csr() @ v.bits.astype(np.int64)) & 1
    return BitSequence(w.astype(np.uint8))


def write_alist(m: SparseBinaryMatrix, fp) -> None:
    """Write ``m`` in alist text format (1-based, columns first)."""
    cd = m.col_degrees()
    rd = m.row_degrees()
    lines = [
        f"{m.cols} {m.rows}",
        f"{int(cd.max(initial=0))} {int(rd.max(initial=0))}",
        " ".join(str(int(d)) for d in cd),
        " ".join(str(int(d)) for d in rd),
    ]
    # zero-degree lines carry a single 0 entry so readers that skip blank
    # lines still see one line per column/row
    for a in m.col_adj:
        lines.append(" ".join(str(int(r) + 1) for r in a) if len(a) else "0")
    for a in m.row_adj:
        lines.append(" ".join(str(int(c) + 1) for c in a) if len(a) else "0")
    fp.write("\n".join(lines) + "\n")


def read_alist(fp) -> SparseBinaryMatrix:
    tokens_per_line = [ln.split() for ln in fp.read().splitlines() if ln.strip()]
    if len(tokens_per_line) < 4:
        raise ValueError("truncated alist file")
    ncols, nrows = (int(t) for t in tokens_per_line[0][:2])
    col_degs = [int(t) for t in tokens_per_line[2]]
    row_degs = [int(t) for t in tokens_per_line[3]]
    if len(col_degs) != ncols or len(row_degs) != nrows:
        raise ValueError("alist degree lists do not match dimensions")
    col_lines = tokens_per_line[4 : 4 + ncols]
    if len(col_lines) < ncols:
        raise ValueError("alist column adjacency truncated")
    col_adj = []
    for c, toks in enumerate(col_lines):
        idx = [int(t) - 1 for t in toks if int(t) != 0]
        if len(idx) != col_degs[c]:
            raise ValueError(f"alist column {c + 1}: degree mismatch")
        col_adj.append(idx)
    return SparseBinaryMatrix.from_col_adjacency(nrows, ncols, col_adj)

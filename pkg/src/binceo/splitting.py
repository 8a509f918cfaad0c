"""Source splitting: one-to-one maps from a sequence to a (W, Z) pair.

Three strategies are supported.  Concatenation cuts the word at a fixed
index.  Threshold compares the word's integer value against T and splits it
into min/max-remainder parts.  Linear-info zero-extends the two halves of an
information word so that, through the linearity of an LDGM code, the two
half-codewords XOR back to the full codeword.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .gf2 import BitSequence, DimensionError, concat, hamming_distortion

KINDS = ("concatenation", "threshold", "linear-info")


@dataclass(frozen=True)
class SplitStrategy:
    kind: str
    n_prime: int | None = None  # concatenation cut index
    threshold: int | None = None  # integer T for the threshold rule

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"unknown split kind {self.kind!r}; one of {KINDS}")
        if self.kind == "concatenation":
            if self.n_prime is None or self.n_prime < 1:
                raise ValueError("concatenation needs n_prime >= 1")
        if self.kind == "threshold":
            if self.threshold is None or self.threshold < 0:
                raise ValueError("threshold needs a nonnegative T")


@dataclass(frozen=True)
class SplitPair:
    w: BitSequence
    z: BitSequence
    strategy: SplitStrategy


def _linear_cut(length: int) -> int:
    return (length + 1) // 2


def split(x: BitSequence, s: SplitStrategy) -> SplitPair:
    n = x.length
    if s.kind == "concatenation":
        if s.n_prime > n:
            raise ValueError(f"n_prime {s.n_prime} exceeds length {n}")
        return SplitPair(w=x[: s.n_prime], z=x[s.n_prime :], strategy=s)
    if s.kind == "threshold":
        if s.threshold >= (1 << n):
            raise ValueError(f"threshold {s.threshold} needs more than {n} bits")
        psi = x.to_int()
        w = BitSequence.from_int(min(psi, s.threshold), n)
        z = BitSequence.from_int(max(psi, s.threshold) - s.threshold, n)
        return SplitPair(w=w, z=z, strategy=s)
    # linear-info: disjoint-support halves, each zero-extended to full length
    cut = _linear_cut(n)
    w = np.zeros(n, dtype=np.uint8)
    z = np.zeros(n, dtype=np.uint8)
    w[:cut] = x.bits[:cut]
    z[cut:] = x.bits[cut:]
    return SplitPair(w=BitSequence(w), z=BitSequence(z), strategy=s)


def merge(pair: SplitPair) -> BitSequence:
    s = pair.strategy
    if s.kind == "concatenation":
        if pair.w.length != s.n_prime:
            raise DimensionError(
                f"merge: w has length {pair.w.length}, strategy cut is {s.n_prime}"
            )
        return concat([pair.w, pair.z])
    if pair.w.length != pair.z.length:
        raise DimensionError(
            f"merge: length mismatch ({pair.w.length} vs {pair.z.length})"
        )
    if s.kind == "threshold":
        # inverse of the min/max rule is plain integer addition
        return BitSequence.from_int(pair.w.to_int() + pair.z.to_int(), pair.w.length)
    return pair.w ^ pair.z


def linear_info_masks(length: int) -> tuple[np.ndarray, np.ndarray]:
    """Boolean masks of the W-support and Z-support of a linear-info split."""
    cut = _linear_cut(length)
    w_mask = np.zeros(length, dtype=bool)
    w_mask[:cut] = True
    return w_mask, ~w_mask


def estimate_alpha_beta(
    y: BitSequence, w_cw: BitSequence, z_cw: BitSequence
) -> tuple[float, float]:
    """Hamming distortions between an observation and the codeword-domain
    images of its split halves."""
    return hamming_distortion(y, w_cw), hamming_distortion(y, z_cw)

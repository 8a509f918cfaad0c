"""The Wyner-Ziv layer: syndrome binning, successive sum-product decoding
with side-information chaining, soft reconstruction and empirical metrics.
"""

from __future__ import annotations

import math
import struct
from dataclasses import dataclass, field

import numpy as np

from .channel import bconv
from .codes import CompoundCode, LdgmCode
from .gf2 import BitSequence, DimensionError, mat_vec_mul
from .mp import LLR_CLIP, check_to_var, edges_from_adjacency

_FROZEN_LLR = 2.0 * LLR_CLIP

POSTERIOR_FLOOR = 2.0**-20


@dataclass(frozen=True)
class LinkMessage:
    """Everything one link transmits: an optional uncoded part plus
    syndromes keyed by binning-block id."""

    raw: BitSequence | None = None
    syndromes: tuple = ()  # ((block_id, BitSequence), ...)

    @property
    def total_bits(self) -> int:
        raw_bits = self.raw.length if self.raw is not None else 0
        return raw_bits + sum(s.length for _, s in self.syndromes)

    def to_bytes(self) -> bytes:
        out = bytearray()
        raw = self.raw.bits if self.raw is not None else np.zeros(0, dtype=np.uint8)
        has_raw = 1 if self.raw is not None else 0
        out += struct.pack("<BI", has_raw, raw.size)
        out += np.packbits(raw, bitorder="little").tobytes()
        out += struct.pack("<I", len(self.syndromes))
        for block_id, s in self.syndromes:
            out += struct.pack("<II", block_id, s.length)
            out += np.packbits(s.bits, bitorder="little").tobytes()
        return bytes(out)

    @classmethod
    def from_bytes(cls, data: bytes) -> "LinkMessage":
        off = 0

        def take_bits(count):
            nonlocal off
            nbytes = (count + 7) // 8
            arr = np.frombuffer(data[off : off + nbytes], dtype=np.uint8)
            off += nbytes
            return BitSequence(np.unpackbits(arr, bitorder="little")[:count])

        has_raw, raw_len = struct.unpack_from("<BI", data, off)
        off += 5
        raw = take_bits(raw_len) if has_raw else None
        (nblocks,) = struct.unpack_from("<I", data, off)
        off += 4
        syndromes = []
        for _ in range(nblocks):
            block_id, slen = struct.unpack_from("<II", data, off)
            off += 8
            syndromes.append((block_id, take_bits(slen)))
        return cls(raw=raw, syndromes=tuple(syndromes))


def make_syndrome(code: CompoundCode, info_bits: BitSequence) -> BitSequence:
    """Binning: the LDPC syndrome H u of the quantizer's information bits."""
    if info_bits.length != code.ldpc.parity.cols:
        raise DimensionError(
            f"make_syndrome: expected {code.ldpc.parity.cols} info bits, "
            f"got {info_bits.length}"
        )
    return mat_vec_mul(code.ldpc.parity, info_bits)


@dataclass(frozen=True)
class SpDecodeResult:
    info_bits: BitSequence
    codeword: BitSequence
    converged: bool
    iterations: int


def sp_decode(
    code: CompoundCode,
    syndrome: BitSequence,
    side_info: BitSequence,
    crossover: float,
    max_iters: int = 200,
    frozen_zero: np.ndarray | None = None,
) -> SpDecodeResult:
    """Syndrome decoding on the joint LDGM+LDPC factor graph.

    LDGM checks tie the hidden codeword bits to side-information evidence
    with LLR (1-2y)ln((1-c)/c); LDPC checks constrain the information bits
    to the received syndrome.  Flooding schedule, messages clipped at
    +-LLR_CLIP, early exit once the syndrome is satisfied.  ``frozen_zero``
    marks information bits known to be zero (split-mode targets).
    Non-convergence is reported through the flag, never raised.
    """
    g = code.ldgm.generator
    h = code.ldpc.parity
    n, m, k = g.cols, g.rows, h.rows
    if side_info.length != n:
        raise DimensionError(f"side info length {side_info.length}, expected {n}")
    if syndrome.length != k:
        raise DimensionError(f"syndrome length {syndrome.length}, expected {k}")
    if not 0.0 < crossover < 0.5:
        raise ValueError(f"crossover {crossover} outside (0, 0.5)")

    llr = math.log((1.0 - crossover) / crossover)
    factor_g = np.tanh(0.5 * (1.0 - 2.0 * side_info.bits.astype(np.float64)) * llr)
    factor_h = 1.0 - 2.0 * syndrome.bits.astype(np.float64)
    evar_g, echk_g = edges_from_adjacency(g.col_adj)
    evar_h, echk_h = edges_from_adjacency(h.row_adj)

    prior = np.zeros(m)
    if frozen_zero is not None:
        prior[np.asarray(frozen_zero, dtype=bool)] = _FROZEN_LLR
    v2c_g = prior[evar_g].astype(np.float64)
    v2c_h = prior[evar_h].astype(np.float64)

    h_csr = h.to_csr()
    s_arr = syndrome.bits.astype(np.int64)
    u_hat = np.zeros(m, dtype=np.uint8)
    u_prev = None
    converged = False
    iterations = 0
    for it in range(1, max_iters + 1):
        iterations = it
        c2v_g = check_to_var(v2c_g, echk_g, factor_g, n)
        c2v_h = check_to_var(v2c_h, echk_h, factor_h, k)
        tot = (
            prior
            + np.bincount(evar_g, weights=c2v_g, minlength=m)
            + np.bincount(evar_h, weights=c2v_h, minlength=m)
        )
        v2c_g = np.clip(tot[evar_g] - c2v_g, -LLR_CLIP, LLR_CLIP)
        v2c_h = np.clip(tot[evar_h] - c2v_h, -LLR_CLIP, LLR_CLIP)
        u_hat = (tot < 0).astype(np.uint8)
        # exit only on a *stable* syndrome-satisfying decision: a short
        # syndrome is chance-satisfied long before the evidence converges
        if (
            u_prev is not None
            and np.array_equal(u_hat, u_prev)
            and np.array_equal((h_csr @ u_hat.astype(np.int64)) & 1, s_arr)
        ):
            converged = True
            break
        u_prev = u_hat
    info = BitSequence(u_hat)
    return SpDecodeResult(
        info_bits=info,
        codeword=mat_vec_mul(g.transpose(), info),
        converged=converged,
        iterations=iterations,
    )


@dataclass(frozen=True)
class RawPart:
    """Uncoded transmission: raw bits embedded at fixed positions of a
    zero-filled information word, then expanded through an LDGM."""

    name: str
    link: int  # 1-based
    ldgm: LdgmCode
    positions: np.ndarray | None = None  # None: raw bits are the full info word

    def expand(self, raw: BitSequence) -> tuple[BitSequence, BitSequence]:
        info = np.zeros(self.ldgm.m, dtype=np.uint8)
        if self.positions is None:
            if raw.length != self.ldgm.m:
                raise DimensionError(
                    f"raw part {self.name}: got {raw.length} bits, "
                    f"expected {self.ldgm.m}"
                )
            info[:] = raw.bits
        else:
            if raw.length != len(self.positions):
                raise DimensionError(
                    f"raw part {self.name}: got {raw.length} bits, "
                    f"expected {len(self.positions)}"
                )
            info[self.positions] = raw.bits
        seq = BitSequence(info)
        return seq, mat_vec_mul(self.ldgm.generator.transpose(), seq)


@dataclass(frozen=True)
class Stage:
    """One successive-decoding step."""

    name: str  # id of the sequence this stage recovers
    link: int  # 1-based link the target belongs to
    block: int  # binning-block id of the syndrome it consumes
    code: CompoundCode
    side: tuple  # ids whose codewords are XORed into the side information
    crossover: float
    frozen_zero: np.ndarray | None = None
    max_iters: int = 200


@dataclass(frozen=True)
class DecodeChain:
    """Ordered successive-decoding plan plus final reassembly rules."""

    raw_parts: tuple  # RawPart entries, resolved before any decoding
    stages: tuple  # Stage entries, strictly in execution order
    merges: tuple = ()  # ((out_name, (part_a, part_b)), ...) codeword XOR

    def validate(self, messages) -> None:
        available = {rp.name for rp in self.raw_parts}
        blocks = {
            block_id for msg in messages for block_id, _ in msg.syndromes
        }
        for st in self.stages:
            missing = [s for s in st.side if s not in available]
            if missing:
                raise ValueError(
                    f"stage {st.name!r}: side information {missing} not "
                    "produced by any earlier stage or raw part"
                )
            if st.block not in blocks:
                raise ValueError(
                    f"stage {st.name!r}: syndrome block {st.block} missing "
                    "from the received messages"
                )
            available.add(st.name)
        for out, parts in self.merges:
            for part in parts:
                if part not in available:
                    raise ValueError(f"merge {out!r}: unknown part {part!r}")


@dataclass(frozen=True)
class StageRecord:
    name: str
    block: int
    ber: float | None
    iterations: int
    converged: bool


@dataclass(frozen=True)
class DecodeOutcome:
    codewords: dict  # name -> BitSequence (length n)
    info_bits: dict  # name -> BitSequence
    stages: tuple  # StageRecord per decoded stage


def successive_decode(messages, chain: DecodeChain, truth=None) -> DecodeOutcome:
    """Run the decode chain: each stage's output codeword becomes available
    as side information to later stages; merges reassemble per-link words.

    ``messages`` maps 1-based link index to LinkMessage (list or dict).
    ``truth`` (optional) maps sequence ids to true codewords for BER
    accounting.
    """
    if isinstance(messages, dict):
        msg_of_link = dict(messages)
    else:
        msg_of_link = {i + 1: msg for i, msg in enumerate(messages)}
    chain.validate(list(msg_of_link.values()))
    syndrome_of_block = {}
    for msg in msg_of_link.values():
        for block_id, s in msg.syndromes:
            syndrome_of_block[block_id] = s

    codewords: dict[str, BitSequence] = {}
    info_bits: dict[str, BitSequence] = {}
    for rp in chain.raw_parts:
        raw = msg_of_link[rp.link].raw
        if raw is None:
            raise ValueError(f"raw part {rp.name!r}: link {rp.link} sent no raw bits")
        info, cw = rp.expand(raw)
        info_bits[rp.name] = info
        codewords[rp.name] = cw

    records = []
    for st in chain.stages:
        side = codewords[st.side[0]]
        for other in st.side[1:]:
            side = side ^ codewords[other]
        res = sp_decode(
            st.code,
            syndrome_of_block[st.block],
            side,
            st.crossover,
            max_iters=st.max_iters,
            frozen_zero=st.frozen_zero,
        )
        codewords[st.name] = res.codeword
        info_bits[st.name] = res.info_bits
        ber = None
        if truth is not None and st.name in truth:
            diff = np.count_nonzero(res.codeword.bits ^ truth[st.name].bits)
            ber = diff / res.codeword.length
        records.append(
            StageRecord(
                name=st.name,
                block=st.block,
                ber=ber,
                iterations=res.iterations,
                converged=res.converged,
            )
        )
    for out, parts in chain.merges:
        acc = codewords[parts[0]]
        for part in parts[1:]:
            acc = acc ^ codewords[part]
        codewords[out] = acc
    return DecodeOutcome(
        codewords=codewords, info_bits=info_bits, stages=tuple(records)
    )


class PosteriorSequence:
    """Per-symbol posterior probability that the source bit equals 1."""

    __slots__ = ("_p1",)

    def __init__(self, p1):
        arr = np.array(p1, dtype=np.float64, copy=True).ravel()
        if arr.size and (arr.min() < 0.0 or arr.max() > 1.0):
            raise ValueError("posterior masses must lie in [0, 1]")
        arr.setflags(write=False)
        self._p1 = arr

    @property
    def p1(self) -> np.ndarray:
        return self._p1

    @property
    def length(self) -> int:
        return self._p1.size

    def __len__(self) -> int:
        return self._p1.size


def soft_reconstruct(u_hats, d_hat, p) -> PosteriorSequence:
    """Symbol-wise Bayes posterior of X from the decoded quantized words.

    Each link is modeled as an end-to-end BSC with crossover
    P_i = d_hat_i * p_i; the prior on X is uniform.
    """
    if not u_hats:
        raise ValueError("need at least one decoded sequence")
    n = u_hats[0].length
    log_odds = np.zeros(n)  # log P(x=1|...) - log P(x=0|...)
    for u, dh, pi in zip(u_hats, d_hat, p, strict=True):
        if u.length != n:
            raise DimensionError("decoded sequences differ in length")
        big_p = bconv(float(dh), float(pi))
        if not 0.0 < big_p < 1.0:
            raise ValueError("degenerate end-to-end crossover")
        lam = math.log((1.0 - big_p) / big_p)
        log_odds += np.where(u.bits == 1, lam, -lam)
    p1 = 1.0 / (1.0 + np.exp(-log_odds))
    return PosteriorSequence(p1)


def log_loss(
    posteriors: PosteriorSequence,
    x_true: BitSequence,
    floor: float = POSTERIOR_FLOOR,
) -> float:
    """Empirical log-loss in bits per symbol, posteriors clamped to
    [floor, 1 - floor] before the logarithm."""
    if posteriors.length != x_true.length:
        raise DimensionError("posterior/source length mismatch")
    p1 = np.clip(posteriors.p1, floor, 1.0 - floor)
    mass_on_true = np.where(x_true.bits == 1, p1, 1.0 - p1)
    return float(np.mean(-np.log2(mass_on_true)))


def account_rates(messages, n: int):
    """Operational per-link rates: transmitted bits divided by n."""
    return [msg.total_bits / n for msg in messages]

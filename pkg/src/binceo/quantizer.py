"""Lossy binary quantization onto an LDGM codebook.

Bias propagation with decimation: sum-product messages run on the LDGM
graph with soft evidence from the input word on every codeword bit; after
each round the most biased still-free information bits are frozen and their
values are folded into the check-node evidence, shrinking the active graph
until every information bit is decided.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .channel import substream
from .codes import LdgmCode
from .gf2 import BitSequence, DimensionError, hamming_distortion, mat_vec_mul
from .mp import check_to_var, edges_from_adjacency, var_totals

_ROLE_RESTART = 6


@dataclass(frozen=True)
class QuantizerParams:
    target_distortion: float
    tolerance: float = 0.01
    max_rounds: int = 2000
    iters_per_round: int = 30
    decimation_fraction: float = 0.01
    damping: float = 0.9
    restarts: int = 5
    strength: float = 1.0  # inverse-temperature scale on the evidence LLR

    def __post_init__(self):
        if not 0.0 < self.target_distortion < 0.5:
            raise ValueError("target distortion must lie in (0, 0.5)")
        if self.tolerance <= 0:
            raise ValueError("tolerance must be positive")
        if min(self.max_rounds, self.iters_per_round, self.restarts) < 1:
            raise ValueError("counts must be positive")
        if not 0.0 < self.decimation_fraction <= 1.0:
            raise ValueError("decimation fraction must lie in (0, 1]")
        if not 0.0 < self.damping <= 1.0:
            raise ValueError("damping must lie in (0, 1]")


@dataclass(frozen=True)
class QuantizationResult:
    info_bits: BitSequence
    codeword: BitSequence
    empirical_distortion: float
    rounds_used: int


class QuantizerShortfall(RuntimeError):
    """Distortion target missed after all restarts; carries the best result."""

    def __init__(self, target: float, best: QuantizationResult):
        super().__init__(
            f"quantizer shortfall: best distortion "
            f"{best.empirical_distortion:.5f} misses target {target:.5f}"
        )
        self.best = best


def quantize(
    y: BitSequence, code: LdgmCode, params: QuantizerParams, seed: int = 0
) -> QuantizationResult:
    """Quantize ``y`` to a nearby LDGM codeword.

    Deterministic per (y, code, params, seed); each restart draws a fresh
    substream.  Raises QuantizerShortfall when even the best restart exceeds
    target + tolerance.
    """
    g = code.generator
    if y.length != g.cols:
        raise DimensionError(
            f"quantize: input length {y.length}, code expects {g.cols}"
        )
    d = params.target_distortion
    llr_scale = params.strength * math.log((1.0 - d) / d)
    evidence = (1.0 - 2.0 * y.bits.astype(np.float64)) * llr_scale
    base_factor = np.tanh(0.5 * evidence)
    evar0, echk0 = edges_from_adjacency(g.col_adj)
    gt = g.transpose()

    best: QuantizationResult | None = None
    for restart in range(params.restarts):
        rng = substream(seed, _ROLE_RESTART, restart)
        result = _bip_once(y, g, gt, base_factor, evar0, echk0, params, rng)
        if best is None or result.empirical_distortion < best.empirical_distortion:
            best = result
        if best.empirical_distortion <= d + params.tolerance:
            return best
    raise QuantizerShortfall(d, best)


def _bip_once(y, g, gt, base_factor, evar0, echk0, params, rng):
    m, n = g.rows, g.cols
    factor = base_factor.copy()
    fixed = np.zeros(m, dtype=bool)
    values = np.zeros(m, dtype=np.uint8)
    evar, echk = evar0, echk0
    v2c = rng.normal(0.0, 0.1, size=evar.size)
    rounds = 0
    tot = np.zeros(m)
    for rnd in range(params.max_rounds):
        rounds = rnd + 1
        for _ in range(params.iters_per_round):
            c2v = check_to_var(v2c, echk, factor, n)
            tot = var_totals(c2v, evar, m, prior=np.zeros(m))
            fresh = tot[evar] - c2v
            v2c = params.damping * fresh + (1.0 - params.damping) * v2c
        free = np.flatnonzero(~fixed)
        n_fix = max(1, math.ceil(params.decimation_fraction * free.size))
        if rnd == params.max_rounds - 1:
            n_fix = free.size
        bias = np.abs(np.tanh(0.5 * tot[free]))
        # strongest bias first, ties toward the lowest index
        order = np.lexsort((free, -bias))
        chosen = free[order[:n_fix]]
        chosen_tot = tot[chosen]
        bit = (chosen_tot < 0).astype(np.uint8)
        undecided = chosen_tot == 0
        if undecided.any():
            bit[undecided] = rng.integers(0, 2, size=int(undecided.sum()))
        fixed[chosen] = True
        values[chosen] = bit
        # fold frozen bits into the evidence of their checks
        for v, b in zip(chosen.tolist(), bit.tolist()):
            if b:
                factor[g.row_adj[v]] *= -1.0
        keep = ~fixed[evar]
        evar, echk, v2c = evar[keep], echk[keep], v2c[keep]
        if fixed.all():
            break
    info = BitSequence(values)
    codeword = mat_vec_mul(gt, info)
    return QuantizationResult(
        info_bits=info,
        codeword=codeword,
        empirical_distortion=hamming_distortion(codeword, y),
        rounds_used=rounds,
    )

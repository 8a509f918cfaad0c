"""Vectorized sum-product primitives shared by the quantizer and the decoder.

A bipartite factor graph is held as flat edge arrays (variable id, check id
per edge).  Check nodes may carry a fixed "port" factor in [-1, 1]: the tanh
of an evidence half-edge for LDGM codeword bits, or +-1 for LDPC syndrome
signs.  The leave-one-out tanh product is computed exactly in the
log-magnitude domain with explicit zero handling, so first-iteration
all-zero messages and saturated (+-1) ports are both safe.
"""

from __future__ import annotations

import numpy as np

LLR_CLIP = 25.0
_TINY = 1e-30


def edges_from_adjacency(adj) -> tuple[np.ndarray, np.ndarray]:
    """Flatten per-check variable lists to (evar, echk) edge arrays."""
    sizes = np.array([len(a) for a in adj], dtype=np.int64)
    echk = np.repeat(np.arange(len(adj), dtype=np.int64), sizes)
    evar = (
        np.concatenate([np.asarray(a, dtype=np.int64) for a in adj if len(a)])
        if sizes.sum()
        else np.zeros(0, dtype=np.int64)
    )
    return evar, echk


def check_to_var(
    v2c: np.ndarray,
    echk: np.ndarray,
    factor: np.ndarray,
    nchk: int,
    clip: float = LLR_CLIP,
) -> np.ndarray:
    """Check-node update: c2v_e = 2 atanh(f_c * prod_{e' != e} tanh(v2c_e'/2))."""
    t = np.tanh(0.5 * np.clip(v2c, -clip, clip))
    mag = np.abs(t)
    zero = mag < _TINY
    logt = np.where(zero, 0.0, np.log(np.maximum(mag, _TINY)))
    neg = ((t < 0) & ~zero).astype(np.float64)
    zerof = zero.astype(np.float64)
    sum_log = np.bincount(echk, weights=logt, minlength=nchk)
    n_zero = np.bincount(echk, weights=zerof, minlength=nchk)
    n_neg = np.bincount(echk, weights=neg, minlength=nchk)

    fmag = np.abs(factor)
    fzero = fmag < _TINY
    flog = np.where(fzero, 0.0, np.log(np.maximum(fmag, _TINY)))
    fneg = (factor < 0) & ~fzero

    c = echk
    others_zero = (n_zero[c] - zerof) > 0.5
    log_prod = sum_log[c] - logt + flog[c]
    parity = (n_neg[c] - neg + fneg[c].astype(np.float64)) % 2
    prod = np.where(
        others_zero | fzero[c],
        0.0,
        np.where(parity > 0.5, -1.0, 1.0) * np.exp(log_prod),
    )
    pmax = np.tanh(0.5 * clip)
    prod = np.clip(prod, -pmax, pmax)
    return 2.0 * np.arctanh(prod)


def var_totals(
    c2v: np.ndarray, evar: np.ndarray, nvar: int, prior: np.ndarray
) -> np.ndarray:
    """Posterior LLR per variable: prior plus all incoming check messages."""
    return prior + np.bincount(evar, weights=c2v, minlength=nvar)

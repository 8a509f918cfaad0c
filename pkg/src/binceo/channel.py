"""Remote source generation and BSC crossover algebra."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .gf2 import BitSequence

# Substream roles.  Streams are keyed by (seed, trial, link, role) so results
# do not depend on execution order of links or trials.
ROLE_SOURCE = 0
ROLE_NOISE = 1
ROLE_QUANTIZER = 2
ROLE_CONSTRUCTION = 3


def substream(seed: int, *key: int) -> np.random.Generator:
    """Counter-based (Philox) generator for a named substream."""
    ss = np.random.SeedSequence(int(seed), spawn_key=tuple(int(k) for k in key))
    return np.random.Generator(np.random.Philox(ss))


@dataclass(frozen=True)
class CeoScenario:
    """One problem instance family: l links observing a BSS of length n."""

    l: int
    n: int
    p: tuple
    seed: int

    def __post_init__(self):
        if self.l < 1:
            raise ValueError("need at least one link")
        if self.n < 1:
            raise ValueError("block length must be positive")
        if len(self.p) != self.l:
            raise ValueError(f"expected {self.l} noise parameters, got {len(self.p)}")
        # 0 and 0.5 are admitted here for degenerate test scenarios; the
        # experiment config layer rejects them.
        for pi in self.p:
            if not 0.0 <= pi <= 0.5:
                raise ValueError(f"noise parameter {pi} outside [0, 0.5]")


def generate_instance(s: CeoScenario, trial: int = 0):
    """Draw (X, [Y_1..Y_l]) with Y_i = X xor Bernoulli(p_i) noise.

    Deterministic per (scenario.seed, trial); links use independent
    substreams.
    """
    rng_x = substream(s.seed, trial, 0, ROLE_SOURCE)
    x = rng_x.integers(0, 2, size=s.n, dtype=np.uint8)
    ys = []
    for i, pi in enumerate(s.p):
        rng_n = substream(s.seed, trial, i + 1, ROLE_NOISE)
        noise = (rng_n.random(s.n) < pi).astype(np.uint8)
        ys.append(BitSequence(x ^ noise))
    return BitSequence(x), ys


def bconv(a, b):
    """Binary convolution a*b = a(1-b) + b(1-a): crossover of cascaded BSCs."""
    a_arr = np.asarray(a, dtype=float)
    b_arr = np.asarray(b, dtype=float)
    if np.any(a_arr < 0) or np.any(a_arr > 1) or np.any(b_arr < 0) or np.any(b_arr > 1):
        raise ValueError("bconv arguments must lie in [0, 1]")
    out = a_arr * (1.0 - b_arr) + b_arr * (1.0 - a_arr)
    if np.isscalar(a) and np.isscalar(b):
        return float(out)
    return out


def chain_crossover(params) -> float:
    """Left fold of bconv over an ordered list of crossover probabilities."""
    params = list(params)
    if not params:
        raise ValueError("chain_crossover needs at least one probability")
    acc = float(params[0])
    if not 0.0 <= acc <= 1.0:
        raise ValueError(f"crossover {acc} outside [0, 1]")
    for q in params[1:]:
        acc = bconv(acc, float(q))
    return acc

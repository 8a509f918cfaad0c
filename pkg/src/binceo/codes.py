"""Construction of LDGM, LDPC and compound codes, plus dimension planning.

Code dimensions follow the rate-distortion relations m_i/n = 1 - h_b(d_i)
+ eps_i for the quantizers and (m - k)/n = 1 - h_b(c) - delta for each
binning block, where c is the effective crossover seen by that block's
sum-product decode.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .bounds import h_b
from .channel import bconv, chain_crossover, substream
from .gf2 import SparseBinaryMatrix


class InfeasibleCodeError(ValueError):
    """Requested degree/edge matching or rate plan cannot be realized."""


@dataclass(frozen=True)
class DegreeDistribution:
    """Node-perspective degree distributions for one code.

    variable_degrees drive LDPC column sampling; check_degrees drive LDGM
    codeword-bit (column) sampling.  Each is a list of (degree, probability).
    """

    variable_degrees: tuple
    check_degrees: tuple

    def __post_init__(self):
        for side, degs in (
            ("variable", self.variable_degrees),
            ("check", self.check_degrees),
        ):
            if not degs:
                raise ValueError(f"{side} degree list is empty")
            total = 0.0
            for deg, prob in degs:
                if int(deg) != deg or deg < 1:
                    raise ValueError(f"{side} degree {deg} is not a positive integer")
                if prob < 0:
                    raise ValueError(f"{side} degree probability {prob} is negative")
                total += prob
            if abs(total - 1.0) > 1e-9:
                raise ValueError(f"{side} degree probabilities sum to {total}, not 1")


# Named presets.  Degree optimization (density evolution, LDGM design
# methods) is out of scope; these are fixed configuration inputs.
PRESETS = {
    # regular (3,6)-style LDPC, generator columns of degree 3
    "reg-3": DegreeDistribution(
        variable_degrees=((3, 1.0),), check_degrees=((3, 1.0),)
    ),
    "reg-4": DegreeDistribution(
        variable_degrees=((4, 1.0),), check_degrees=((4, 1.0),)
    ),
    # mixed low-degree profile for BiP quantization
    "ldgm-mix34": DegreeDistribution(
        variable_degrees=((3, 1.0),),
        check_degrees=((3, 0.5), (4, 0.5)),
    ),
    # low-degree codeword-bit profile tuned for BiP at rates near 0.5
    "ldgm-a": DegreeDistribution(
        variable_degrees=((3, 1.0),),
        check_degrees=((1, 0.05), (2, 0.45), (3, 0.5)),
    ),
    # mildly irregular BSC profile for syndrome decoding
    "ldpc-bsc-irr": DegreeDistribution(
        variable_degrees=((2, 0.4), (3, 0.35), (6, 0.25)),
        check_degrees=((6, 1.0),),
    ),
}


def get_preset(name: str) -> DegreeDistribution:
    try:
        return PRESETS[name]
    except KeyError:
        raise KeyError(
            f"unknown degree preset {name!r}; available: {sorted(PRESETS)}"
        ) from None


@dataclass(frozen=True)
class LdgmCode:
    """Low-density generator matrix: m info rows by n codeword columns."""

    generator: SparseBinaryMatrix

    def __post_init__(self):
        g = self.generator
        if not 0 < g.rows <= g.cols:
            raise ValueError("LDGM requires 0 < m <= n")
        if int(g.col_degrees().min(initial=1)) < 1:
            raise ValueError("LDGM has an unconstrained codeword bit")

    @property
    def m(self) -> int:
        return self.generator.rows

    @property
    def n(self) -> int:
        return self.generator.cols

    @property
    def rate(self) -> float:
        return self.m / self.n


@dataclass(frozen=True)
class LdpcCode:
    """Parity-check matrix: k syndrome rows by m columns (host LDGM info bits)."""

    parity: SparseBinaryMatrix

    def __post_init__(self):
        h = self.parity
        if not 0 < h.rows < h.cols:
            raise ValueError("LDPC requires 0 < k < m")
        if int(h.row_degrees().min(initial=1)) < 1:
            raise ValueError("LDPC has an all-zero parity row")

    @property
    def k(self) -> int:
        return self.parity.rows

    @property
    def m(self) -> int:
        return self.parity.cols


@dataclass(frozen=True)
class CompoundCode:
    """Nested pair: the LDPC constrains the LDGM's information bits."""

    ldgm: LdgmCode
    ldpc: LdpcCode

    def __post_init__(self):
        if self.ldpc.parity.cols != self.ldgm.generator.rows:
            raise ValueError(
                f"nesting mismatch: LDPC acts on {self.ldpc.parity.cols} bits, "
                f"LDGM has {self.ldgm.generator.rows} info bits"
            )

    @property
    def n(self) -> int:
        return self.ldgm.n

    @property
    def m(self) -> int:
        return self.ldgm.m

    @property
    def k(self) -> int:
        return self.ldpc.k


def _realize_degrees(count: int, degs, rng: np.random.Generator) -> np.ndarray:
    """Quantize a degree distribution to exact node counts (largest remainder:
    every degree class is within 1 node of count * probability), shuffled."""
    degrees = np.array([d for d, _ in degs], dtype=np.int64)
    probs = np.array([p for _, p in degs], dtype=float)
    ideal = probs * count
    base = np.floor(ideal).astype(np.int64)
    short = count - int(base.sum())
    order = np.argsort(-(ideal - base), kind="stable")
    base[order[:short]] += 1
    out = np.repeat(degrees, base)
    rng.shuffle(out)
    return out


def sample_ldgm(n: int, m: int, dd: DegreeDistribution, seed: int) -> LdgmCode:
    """Random LDGM generator with the requested codeword-column degrees and
    near-uniform info-row usage.  Deterministic per seed."""
    if not 0 < m <= n:
        raise ValueError(f"need 0 < m <= n, got m={m}, n={n}")
    rng = substream(seed, 4)
    col_degs = _realize_degrees(n, dd.check_degrees, rng)
    if int(col_degs.max()) > m:
        raise InfeasibleCodeError(
            f"column degree {int(col_degs.max())} exceeds m={m} rows"
        )
    total = int(col_degs.sum())
    # socket list: every row appears floor(total/m) or ceil(total/m) times
    base, extra = divmod(total, m)
    sockets = np.repeat(np.arange(m, dtype=np.int64), base)
    if extra:
        sockets = np.concatenate(
            [sockets, rng.choice(m, size=extra, replace=False)]
        )
    rng.shuffle(sockets)
    bounds_ = np.zeros(n + 1, dtype=np.int64)
    bounds_[1:] = np.cumsum(col_degs)
    col_adj = [sockets[bounds_[j] : bounds_[j + 1]] for j in range(n)]
    # repair duplicate rows within a column by swapping with random sockets
    for j in range(n):
        tries = 0
        while len(set(col_adj[j].tolist())) != col_adj[j].size:
            tries += 1
            if tries > 200:
                raise InfeasibleCodeError(
                    f"socket imbalance: cannot deduplicate column {j} "
                    f"(degree {col_adj[j].size}, m={m})"
                )
            vals, counts = np.unique(col_adj[j], return_counts=True)
            dup = int(vals[np.argmax(counts)])
            pos = int(np.where(col_adj[j] == dup)[0][0])
            j2 = int(rng.integers(0, n))
            if j2 == j or col_adj[j2].size == 0:
                continue
            pos2 = int(rng.integers(0, col_adj[j2].size))
            other = int(col_adj[j2][pos2])
            if other in col_adj[j] or dup in col_adj[j2]:
                continue
            a, b = col_adj[j].copy(), col_adj[j2].copy()
            a[pos], b[pos2] = other, dup
            col_adj[j], col_adj[j2] = a, b
    mat = SparseBinaryMatrix.from_col_adjacency(m, n, [a.tolist() for a in col_adj])
    return LdgmCode(generator=mat)


def sample_ldpc(
    m: int,
    k: int,
    dd: DegreeDistribution,
    seed: int,
    girth_avoidance: bool = True,
) -> LdpcCode:
    """Progressive-edge-growth LDPC construction.

    Column degrees follow dd.variable_degrees; check degrees balance out by
    always extending the lowest-degree admissible check.  With girth
    avoidance on, edges closing a 4-cycle are refused while an alternative
    exists.  Deterministic per seed.
    """
    if not 0 < k < m:
        raise ValueError(f"need 0 < k < m, got k={k}, m={m}")
    rng = substream(seed, 5)
    # a variable cannot attach twice to one check, so degrees cap at k
    var_degs = np.minimum(_realize_degrees(m, dd.variable_degrees, rng), k)
    if int(var_degs.sum()) < k:
        raise InfeasibleCodeError(
            f"only {int(var_degs.sum())} edges for {k} parity rows; "
            "some rows would be all-zero"
        )
    chk_of_var = [set() for _ in range(m)]
    var_of_chk = [set() for _ in range(k)]
    chk_deg = np.zeros(k, dtype=np.int64)
    order = np.argsort(var_degs, kind="stable")  # low-degree variables first
    for v in order.tolist():
        for _ in range(int(var_degs[v])):
            own = chk_of_var[v]
            forbidden = set(own)
            if girth_avoidance:
                for c in own:
                    for v2 in var_of_chk[c]:
                        forbidden |= chk_of_var[v2]
            mask = np.ones(k, dtype=bool)
            if forbidden:
                mask[list(forbidden)] = False
            if not mask.any():
                # PEG stalled: fall back to any check not already linked to v
                mask[:] = True
                mask[list(own)] = False
            if not mask.any():
                raise InfeasibleCodeError(
                    f"socket imbalance: variable {v} already linked to all "
                    f"{k} checks"
                )
            deg = np.where(mask, chk_deg, np.iinfo(np.int64).max)
            cands = np.flatnonzero(deg == deg.min())
            c = int(cands[rng.integers(0, cands.size)])
            chk_of_var[v].add(c)
            var_of_chk[c].add(v)
            chk_deg[c] += 1
    mat = SparseBinaryMatrix(k, m, [sorted(s) for s in var_of_chk])
    return LdpcCode(parity=mat)


def _round_half_up(x: float) -> int:
    return int(math.floor(x + 0.5))


@dataclass(frozen=True)
class LinkPlan:
    """All code dimensions and achieved slacks for one experiment."""

    n: int
    mode: str
    m: tuple  # per-link info-bit counts
    k: tuple  # per-binning-block syndrome lengths
    epsilon: tuple  # achieved quantizer slack per link (exact after rounding)
    delta: tuple  # achieved binning slack per block (exact after rounding)
    crossovers: tuple  # effective crossover per binning block
    targets: tuple
    noises: tuple


def plan_rates(
    targets,
    noises,
    n: int,
    epsilons,
    deltas,
    mode: str = "corner",
    alpha=None,
    beta=None,
) -> LinkPlan:
    """Plan m_i and k_i from target distortions and channel parameters.

    Corner mode: link 1 is sent raw; block i bins link i+1 against the chain
    crossover P_i * P_{i+1}.  Split mode (l = 3 only): the four binning
    blocks use crossovers p1*p2*a1*a2, p2*P3*a2, p1*P3*b1 and p1*p2*b1*b2,
    which requires supplied alpha/beta estimates.
    """
    targets = tuple(float(x) for x in targets)
    noises = tuple(float(x) for x in noises)
    l = len(targets)
    if len(noises) != l:
        raise ValueError("targets and noises must have equal lengths")
    for x in targets + noises:
        if not 0.0 < x < 0.5:
            raise ValueError(f"parameter {x} outside (0, 0.5)")
    eps = _broadcast(epsilons, l, "epsilon")
    if any(e < 0 for e in eps):
        raise ValueError("slacks must be nonnegative")

    m = []
    eps_out = []
    for i in range(l):
        mi = _round_half_up(n * (1.0 - h_b(targets[i]) + eps[i]))
        if not 0 < mi <= n:
            raise InfeasibleCodeError(
                f"quantizer line for link {i + 1}: m = {mi} outside (0, {n}]"
            )
        m.append(mi)
        eps_out.append(mi / n - (1.0 - h_b(targets[i])))

    P = [bconv(d, p) for d, p in zip(targets, noises)]
    if mode == "corner":
        if l < 2:
            raise ValueError("corner mode needs at least two links")
        crossovers = [chain_crossover([P[i], P[i + 1]]) for i in range(l - 1)]
        hosts = list(range(1, l))  # block i bins link i+1
        names = [f"chain block {i + 1}" for i in range(l - 1)]
    elif mode == "split":
        if l != 3:
            raise ValueError("split-mode planning is defined for l = 3")
        if alpha is None or beta is None:
            raise ValueError("split mode requires alpha and beta estimates")
        a = tuple(float(x) for x in alpha)
        b = tuple(float(x) for x in beta)
        if len(a) != 2 or len(b) != 2:
            raise ValueError("alpha and beta must each hold two values")
        p1, p2, _ = noises
        crossovers = [
            chain_crossover([p1, p2, a[0], a[1]]),
            chain_crossover([p2, P[2], a[1]]),
            chain_crossover([p1, P[2], b[0]]),
            chain_crossover([p1, p2, b[0], b[1]]),
        ]
        hosts = [1, 2, 0, 1]  # LDGM codes 2, 3, 1, 2 (0-based)
        names = ["LDPC 1", "LDPC 2", "LDPC 3", "LDPC 4"]
    else:
        raise ValueError(f"unknown mode {mode!r}")

    dels = _broadcast(deltas, len(crossovers), "delta")
    if any(x < 0 for x in dels):
        raise ValueError("slacks must be nonnegative")
    k = []
    del_out = []
    for blk, (c, host, dlt) in enumerate(zip(crossovers, hosts, dels)):
        rate = 1.0 - h_b(c) - dlt
        ki = m[host] - _round_half_up(n * rate)
        if not 0 < ki < m[host]:
            raise InfeasibleCodeError(
                f"{names[blk]}: rate line 1 - h_b({c:.4f}) - {dlt:g} gives "
                f"k = {ki} outside (0, {m[host]})"
            )
        k.append(ki)
        del_out.append(1.0 - h_b(c) - (m[host] - ki) / n)
    return LinkPlan(
        n=n,
        mode=mode,
        m=tuple(m),
        k=tuple(k),
        epsilon=tuple(eps_out),
        delta=tuple(del_out),
        crossovers=tuple(crossovers),
        targets=targets,
        noises=noises,
    )


def _broadcast(value, count: int, name: str):
    if np.isscalar(value):
        return [float(value)] * count
    vals = [float(v) for v in value]
    if len(vals) != count:
        raise ValueError(f"expected {count} {name} values, got {len(vals)}")
    return vals

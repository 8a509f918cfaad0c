"""Exact rate-distortion machinery for the binary CEO problem under log-loss.

Closed-form sum-rate/distortion bounds with BSC test channels, the
brute-force joint-pmf oracle behind them, membership checks for the
achievable region, and the exhaustive-search allocation optimizer.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations

import numpy as np

from .channel import bconv

_LOG2 = np.log(2.0)


def h_b(x):
    """Binary entropy in bits; limits at 0 and 1 are defined as 0."""
    arr = np.asarray(x, dtype=float)
    if np.any(arr < 0) or np.any(arr > 1):
        raise ValueError("h_b argument must lie in [0, 1]")
    out = np.zeros_like(arr)
    inner = (arr > 0) & (arr < 1)
    a = arr[inner]
    out[inner] = -(a * np.log2(a) + (1.0 - a) * np.log2(1.0 - a))
    if np.isscalar(x):
        return float(out)
    return out


def _xlog2x(p: np.ndarray) -> np.ndarray:
    out = np.zeros_like(p)
    nz = p > 0
    out[nz] = p[nz] * np.log2(p[nz])
    return out


@dataclass(frozen=True)
class TestChannelPoint:
    """Per-link quantizer crossovers d and observation noises p."""

    d: tuple
    p: tuple

    def __post_init__(self):
        if len(self.d) != len(self.p):
            raise ValueError("d and p must have equal lengths")
        for v in self.d:
            if not 0.0 <= v <= 0.5:
                raise ValueError(f"test-channel crossover {v} outside [0, 0.5]")
        for v in self.p:
            if not 0.0 <= v <= 0.5:
                raise ValueError(f"noise parameter {v} outside [0, 0.5]")

    @property
    def l(self) -> int:
        return len(self.d)

    @property
    def P(self) -> tuple:
        """End-to-end crossovers P_i = d_i * p_i (binary convolution)."""
        return tuple(bconv(di, pi) for di, pi in zip(self.d, self.p))


@dataclass(frozen=True)
class BoundPoint:
    sum_rate: float
    distortion: float


def nu_vector(point: TestChannelPoint) -> np.ndarray:
    """Conditional law of (U_1..U_l) given X=0, indexed by the binary
    expansion of j-1 with u_1 as the most significant bit."""
    l = point.l
    P = np.asarray(point.P)
    nu = np.ones(2**l)
    for i in range(l):
        bit = (np.arange(2**l) >> (l - 1 - i)) & 1
        nu *= np.where(bit == 1, P[i], 1.0 - P[i])
    return nu


def joint_entropy_U(point: TestChannelPoint) -> float:
    """H(U_1..U_l) in bits for a uniform source seen through BSC(P_i)."""
    nu = nu_vector(point)
    half = nu.size // 2
    s = nu[:half] + nu[::-1][:half]  # nu_j + nu_{2^l + 1 - j}, 1-based pairing
    return float(-2.0 * np.sum(_xlog2x(s / 2.0)))


def bound_point(point: TestChannelPoint) -> BoundPoint:
    """Sum-rate I(U^l;Y^l) and distortion H(X|U^l) at a test-channel point."""
    hu = joint_entropy_U(point)
    sum_rate = hu - float(np.sum(h_b(np.asarray(point.d))))
    distortion = 1.0 + float(np.sum(h_b(np.asarray(point.P)))) - hu
    return BoundPoint(sum_rate=sum_rate, distortion=distortion)


class JointPmf:
    """Exact probability table over (X, Y_1..Y_l, U_1..U_l).

    Axis 0 is X, axes 1..l are Y_i, axes l+1..2l are U_i.  Used as an
    independent oracle for all closed-form entropy and mutual-information
    expressions.
    """

    def __init__(self, table: np.ndarray, l: int):
        table = np.asarray(table, dtype=float)
        if table.shape != (2,) * (2 * l + 1):
            raise ValueError(f"expected shape {(2,) * (2 * l + 1)}")
        if np.any(table < 0) or abs(table.sum() - 1.0) > 1e-12:
            raise ValueError("joint pmf must be nonnegative and sum to 1")
        self.table = table
        self.l = l

    @classmethod
    def from_test_channel(cls, point: TestChannelPoint) -> "JointPmf":
        l = point.l
        table = np.full((2,) * (2 * l + 1), 0.5)
        for i in range(l):
            # p(y_i | x): BSC(p_i) on axes (0, 1+i)
            bsc = np.array(
                [[1 - point.p[i], point.p[i]], [point.p[i], 1 - point.p[i]]]
            )
            shape = [1] * (2 * l + 1)
            shape[0] = 2
            shape[1 + i] = 2
            table = table * bsc.reshape(shape)
            # p(u_i | y_i): BSC(d_i) on axes (1+i, 1+l+i)
            bsc = np.array(
                [[1 - point.d[i], point.d[i]], [point.d[i], 1 - point.d[i]]]
            )
            shape = [1] * (2 * l + 1)
            shape[1 + i] = 2
            shape[1 + l + i] = 2
            table = table * bsc.reshape(shape)
        return cls(table, l)

    def entropy(self, axes) -> float:
        """Joint entropy in bits of the variables on the given axes."""
        axes = tuple(sorted(axes))
        drop = tuple(a for a in range(self.table.ndim) if a not in axes)
        marg = self.table.sum(axis=drop) if drop else self.table
        return float(-_xlog2x(marg.ravel()).sum())

    def x_axis(self):
        return 0

    def y_axes(self, links):
        return tuple(1 + i for i in links)

    def u_axes(self, links):
        return tuple(1 + self.l + i for i in links)

    def entropy_U(self) -> float:
        return self.entropy(self.u_axes(range(self.l)))

    def mi_U_Y(self) -> float:
        """I(U^l; Y^l)."""
        u = self.u_axes(range(self.l))
        y = self.y_axes(range(self.l))
        return self.entropy(u) + self.entropy(y) - self.entropy(u + y)

    def cond_entropy_X_given_U(self) -> float:
        u = self.u_axes(range(self.l))
        return self.entropy((0,) + u) - self.entropy(u)

    def conditional_mi(self, subset) -> float:
        """I(Y_A; U_A | U_{A^c}) for a subset A of links (0-based)."""
        a = tuple(sorted(subset))
        comp = tuple(i for i in range(self.l) if i not in a)
        ya = self.y_axes(a)
        ua = self.u_axes(a)
        uc = self.u_axes(comp)
        return (
            self.entropy(ya + uc)
            + self.entropy(ua + uc)
            - (self.entropy(uc) if uc else 0.0)
            - self.entropy(ya + ua + uc)
        )


@dataclass(frozen=True)
class RegionReport:
    ok: bool
    violated_subset: tuple | None  # 1-based link ids, or () for the distortion line
    margin: float


def region_check(rates, distortion: float, point: TestChannelPoint) -> RegionReport:
    """Berger-Tung membership: all 2^l - 1 subset inequalities plus the
    distortion line, evaluated exactly from the joint pmf (Q constant)."""
    rates = [float(r) for r in rates]
    if len(rates) != point.l:
        raise ValueError("one rate per link required")
    if any(r < 0 for r in rates):
        raise ValueError("rates must be nonnegative")
    pmf = JointPmf.from_test_channel(point)
    dbound = pmf.cond_entropy_X_given_U()
    if distortion < dbound - 1e-12:
        return RegionReport(False, (), distortion - dbound)
    for size in range(1, point.l + 1):
        for subset in combinations(range(point.l), size):
            need = pmf.conditional_mi(subset)
            have = sum(rates[i] for i in subset)
            if have < need - 1e-12:
                return RegionReport(
                    False, tuple(i + 1 for i in subset), have - need
                )
    return RegionReport(True, None, 0.0)


def _grid_axis(grid_step: float) -> np.ndarray:
    npts = int(round(0.5 / grid_step)) + 1
    return np.linspace(0.0, 0.5, npts)


def _grid_eval(p, grid_step: float):
    """Evaluate (sum_rate, distortion) on the full grid [0,0.5]^l.

    Returns (d_grid [N,l], sum_rate [N], distortion [N]) with rows in
    lexicographic order of d.
    """
    p = tuple(float(v) for v in p)
    l = len(p)
    if l > 4:
        raise ValueError("exhaustive grid search is limited to l <= 4")
    if not 0 < grid_step <= 0.1:
        raise ValueError("grid_step must lie in (0, 0.1]")
    axis = _grid_axis(grid_step)
    mesh = np.meshgrid(*([axis] * l), indexing="ij")
    d = np.stack([m.ravel() for m in mesh], axis=1)
    sum_rate = np.empty(d.shape[0])
    distortion = np.empty(d.shape[0])
    chunk = 1 << 20
    for lo in range(0, d.shape[0], chunk):
        dd = d[lo : lo + chunk]
        P = np.empty_like(dd)
        hb_d = np.empty_like(dd)
        hb_P = np.empty_like(dd)
        for i in range(l):
            P[:, i] = bconv(dd[:, i], p[i])
            hb_d[:, i] = h_b(dd[:, i])
            hb_P[:, i] = h_b(P[:, i])
        hu = np.zeros(dd.shape[0])
        for j in range(2 ** (l - 1)):
            nu_j = np.ones(dd.shape[0])
            nu_c = np.ones(dd.shape[0])
            for i in range(l):
                bit = (j >> (l - 1 - i)) & 1
                nu_j *= P[:, i] if bit else 1.0 - P[:, i]
                nu_c *= 1.0 - P[:, i] if bit else P[:, i]
            s = nu_j + nu_c
            hu -= 2.0 * _xlog2x(s / 2.0)
        sum_rate[lo : lo + chunk] = hu - hb_d.sum(axis=1)
        distortion[lo : lo + chunk] = 1.0 + hb_P.sum(axis=1) - hu
    return d, sum_rate, distortion


class EmptyFeasibleBandError(ValueError):
    pass


def optimize_allocation(p, mode: str, value: float, grid_step: float = 0.005):
    """Exhaustive-search allocation of d over [0, 0.5]^l.

    mode "fixed-distortion": among grid points with |H(X|U^l) - value| within
    the grid-induced band 2*l*grid_step, return the minimum sum rate.
    mode "lagrangian": minimize H(X|U^l) + value * I(U^l;Y^l) over the grid.
    Ties break toward the lexicographically smallest d.
    """
    d, sum_rate, distortion = _grid_eval(p, grid_step)
    l = d.shape[1]
    if mode == "fixed-distortion":
        band = 2.0 * l * grid_step
        feasible = np.abs(distortion - value) <= band
        if not feasible.any():
            raise EmptyFeasibleBandError(
                f"no grid point has distortion within {band:g} of {value:g}; "
                "widen the band or refine the grid"
            )
        obj = np.where(feasible, sum_rate, np.inf)
    elif mode == "lagrangian":
        obj = distortion + value * sum_rate
    else:
        raise ValueError(f"unknown mode {mode!r}")
    best = obj.min()
    # rows are in lexicographic d order, so the first minimizer wins ties
    idx = int(np.argmax(obj <= best + 1e-12))
    point = TestChannelPoint(d=tuple(d[idx]), p=tuple(float(v) for v in p))
    return point, BoundPoint(sum_rate=float(sum_rate[idx]), distortion=float(distortion[idx]))


def sweep_curves(p, variants, grid_step: float = 0.005):
    """Equal-d sum-rate/distortion series per variant.

    A variant is a subset of 1-based link indices; links outside the subset
    are silent (d = 0.5).  Returns {variant: array of rows
    (distortion, sum_rate, d_1..d_l)} sorted by distortion.
    """
    p = tuple(float(v) for v in p)
    l = len(p)
    axis = _grid_axis(grid_step)
    out = {}
    for variant in variants:
        subset = tuple(sorted(int(i) for i in variant))
        if not subset or subset[0] < 1 or subset[-1] > l:
            raise ValueError(f"invalid link subset {variant!r}")
        rows = []
        for dv in axis:
            d = tuple(dv if (i + 1) in subset else 0.5 for i in range(l))
            bp = bound_point(TestChannelPoint(d=d, p=p))
            rows.append((bp.distortion, bp.sum_rate) + d)
        arr = np.array(rows)
        out[subset] = arr[np.argsort(arr[:, 0], kind="stable")]
    return out


def optimized_envelope(p, grid_step: float = 0.005):
    """Lower envelope of the full d-grid: for each achieved distortion level,
    the minimum sum rate over all grid points with distortion <= that level.

    Returns an array of (distortion, sum_rate, d_1..d_l) rows with strictly
    increasing distortion and non-increasing rate.
    """
    d, sum_rate, distortion = _grid_eval(p, grid_step)
    order = np.argsort(distortion, kind="stable")
    rows = []
    best_rate = np.inf
    best_d = None
    for idx in order:
        if sum_rate[idx] < best_rate - 1e-15:
            best_rate = sum_rate[idx]
            best_d = d[idx]
            rows.append((float(distortion[idx]), float(best_rate)) + tuple(best_d))
    return np.array(rows)


def min_rate_at_distortion(p, targets, grid_step: float = 0.005):
    """Minimum grid sum rate subject to distortion <= target, per target."""
    _, sum_rate, distortion = _grid_eval(p, grid_step)
    order = np.argsort(distortion, kind="stable")
    dist_sorted = distortion[order]
    prefix_min = np.minimum.accumulate(sum_rate[order])
    targets = np.asarray(targets, dtype=float)
    pos = np.searchsorted(dist_sorted, targets + 1e-12, side="right") - 1
    out = np.full(targets.shape, np.inf)
    ok = pos >= 0
    out[ok] = prefix_min[pos[ok]]
    return out

import numpy as np
import pytest

from binceo.bounds import (
    BoundPoint,
    JointPmf,
    TestChannelPoint,
    bound_point,
    h_b,
    joint_entropy_U,
    min_rate_at_distortion,
    nu_vector,
    optimize_allocation,
    optimized_envelope,
    region_check,
    sweep_curves,
)
from binceo.channel import substream

from oracles import joint_stats


def test_h_b_reference_values():
    assert h_b(0.0) == 0.0
    assert h_b(1.0) == 0.0
    assert h_b(0.5) == pytest.approx(1.0)
    assert h_b(0.11) == pytest.approx(0.4999, abs=5e-4)
    with pytest.raises(ValueError):
        h_b(-0.01)


def test_nu_vector_is_conditional_pmf():
    rng = substream(4, 0)
    for l in (1, 2, 3):
        point = TestChannelPoint(
            d=tuple(rng.uniform(0, 0.5, l)), p=tuple(rng.uniform(0, 0.5, l))
        )
        nu = nu_vector(point)
        assert nu.shape == (2**l,)
        assert nu.sum() == pytest.approx(1.0)
        # entry for the all-zero u word is the product of (1 - P_i)
        assert nu[0] == pytest.approx(np.prod([1 - P for P in point.P]))


def test_closed_forms_match_enumeration_oracle():
    rng = substream(4, 1)
    for l in (1, 2, 3):
        for _ in range(25):
            d = rng.uniform(0.01, 0.49, l)
            p = rng.uniform(0.01, 0.49, l)
            point = TestChannelPoint(d=tuple(d), p=tuple(p))
            h_u, mi_uy, h_x_u = joint_stats(d, p)
            assert joint_entropy_U(point) == pytest.approx(h_u, abs=1e-9)
            bp = bound_point(point)
            assert bp.sum_rate == pytest.approx(mi_uy, abs=1e-9)
            assert bp.distortion == pytest.approx(h_x_u, abs=1e-9)


def test_jointpmf_agrees_with_enumeration():
    rng = substream(4, 2)
    for l in (1, 2, 3):
        d = rng.uniform(0.01, 0.49, l)
        p = rng.uniform(0.01, 0.49, l)
        pmf = JointPmf.from_test_channel(TestChannelPoint(d=tuple(d), p=tuple(p)))
        h_u, mi_uy, h_x_u = joint_stats(d, p)
        assert pmf.entropy_U() == pytest.approx(h_u, abs=1e-12)
        assert pmf.mi_U_Y() == pytest.approx(mi_uy, abs=1e-12)
        assert pmf.cond_entropy_X_given_U() == pytest.approx(h_x_u, abs=1e-12)


def test_bound_point_degenerate_limits():
    # d = 0.5 erases every link: zero rate, full source entropy remains
    point = TestChannelPoint(d=(0.5, 0.5), p=(0.1, 0.2))
    bp = bound_point(point)
    assert bp.sum_rate == pytest.approx(0.0, abs=1e-12)
    assert bp.distortion == pytest.approx(1.0, abs=1e-12)
    # single noiseless link with d = 0: X is recovered exactly
    point = TestChannelPoint(d=(0.0,), p=(0.0,))
    bp = bound_point(point)
    assert bp.sum_rate == pytest.approx(1.0, abs=1e-12)
    assert bp.distortion == pytest.approx(0.0, abs=1e-12)


def test_region_check_accepts_bound_and_rejects_below():
    point = TestChannelPoint(d=(0.102, 0.1031, 0.1025), p=(0.1, 0.1, 0.1))
    bp = bound_point(point)
    pmf = JointPmf.from_test_channel(point)
    # per-link rates from the chain rule are admissible by construction
    rates = [pmf.conditional_mi([0]),
             pmf.conditional_mi([1]) + 0.05,
             pmf.conditional_mi([2]) + 0.10]
    total = pmf.mi_U_Y()
    rates[1] += total - sum(rates) - 0.15 + 0.05
    rates = [pmf.conditional_mi([i]) + 0.2 for i in range(3)]
    rep = region_check(rates, bp.distortion + 1e-9, point)
    assert rep.ok
    bad = region_check([0.0, 0.0, 0.0], bp.distortion + 1e-9, point)
    assert not bad.ok and bad.violated_subset is not None
    low = region_check(rates, bp.distortion - 0.01, point)
    assert not low.ok and low.violated_subset == ()


def test_optimize_allocation_fixed_distortion_feasible():
    point, bp = optimize_allocation((0.1, 0.1, 0.1), "fixed-distortion", 0.3537,
                                    grid_step=0.01)
    band = 2 * 3 * 0.01
    assert abs(bp.distortion - 0.3537) <= band + 1e-12
    # no equal-d grid point in the band does better
    for d in np.arange(0.0, 0.51, 0.01):
        cand = bound_point(TestChannelPoint(d=(d, d, d), p=(0.1, 0.1, 0.1)))
        if abs(cand.distortion - 0.3537) <= band:
            assert bp.sum_rate <= cand.sum_rate + 1e-12


def test_optimize_allocation_lagrangian():
    point, bp = optimize_allocation((0.05, 0.2), "lagrangian", 1.0, grid_step=0.02)
    target = bp.distortion + 1.0 * bp.sum_rate
    for d1 in np.arange(0.0, 0.51, 0.02):
        for d2 in np.arange(0.0, 0.51, 0.02):
            cand = bound_point(TestChannelPoint(d=(d1, d2), p=(0.05, 0.2)))
            assert target <= cand.distortion + cand.sum_rate + 1e-9


def test_sweep_curves_structure():
    curves = sweep_curves((0.01, 0.1, 0.2), [(1,), (1, 2), (1, 2, 3)],
                          grid_step=0.05)
    assert set(curves) == {(1,), (1, 2), (1, 2, 3)}
    for arr in curves.values():
        arr = np.asarray(arr)
        # rows sorted by distortion, rates nonnegative
        d = arr[:, 0]
        assert np.all(np.diff(d) >= -1e-12)
        assert np.all(arr[:, 1] >= -1e-12)


def test_optimized_envelope_dominates_equal_d():
    env = np.asarray(optimized_envelope((0.1, 0.1, 0.1), grid_step=0.05))
    equal = [bound_point(TestChannelPoint(d=(d, d, d), p=(0.1, 0.1, 0.1)))
             for d in np.arange(0.0, 0.5001, 0.05)]
    for dist, rate in env[:, :2]:
        # no equal-d point on the same grid at distortion <= dist is cheaper
        for bp in equal:
            if bp.distortion <= dist + 1e-12:
                assert rate <= bp.sum_rate + 1e-9
    # envelope rows are sorted with non-increasing rate
    assert np.all(np.diff(env[:, 0]) > 0)
    assert np.all(np.diff(env[:, 1]) < 0)


def test_min_rate_at_distortion_matches_bound():
    targets = (0.25, 0.35, 0.45)
    out = min_rate_at_distortion((0.1, 0.1, 0.1), targets, grid_step=0.02)
    assert len(out) == len(targets)
    prev = None
    for rate in out:
        if prev is not None:
            assert rate <= prev + 1e-12  # rate falls as allowed distortion grows
        prev = rate

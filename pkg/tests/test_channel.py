import numpy as np
import pytest

from binceo.channel import (
    CeoScenario,
    bconv,
    chain_crossover,
    generate_instance,
    substream,
)


def test_bconv_identities():
    rng = substream(3, 0)
    for _ in range(50):
        a, b, c = rng.uniform(0, 0.5, 3)
        assert bconv(a, 0.0) == pytest.approx(a)
        assert bconv(a, 0.5) == pytest.approx(0.5)
        assert bconv(a, b) == pytest.approx(bconv(b, a))
        assert bconv(a, bconv(b, c)) == pytest.approx(bconv(bconv(a, b), c))
        assert bconv(a, b) == pytest.approx(a * (1 - b) + b * (1 - a))


def test_bconv_monotone():
    xs = np.linspace(0, 0.5, 51)
    vals = [bconv(x, 0.2) for x in xs]
    assert all(v2 >= v1 for v1, v2 in zip(vals, vals[1:]))
    assert all(0.0 <= v <= 0.5 for v in vals)


def test_chain_crossover_matches_folded_bconv():
    rng = substream(3, 1)
    for _ in range(20):
        params = rng.uniform(0, 0.5, int(rng.integers(1, 5)))
        acc = 0.0
        for v in params:
            acc = bconv(acc, float(v))
        assert chain_crossover(params) == pytest.approx(acc)


def test_substream_deterministic_and_disjoint():
    a = substream(7, 1, 2).integers(0, 2**30, 8)
    b = substream(7, 1, 2).integers(0, 2**30, 8)
    c = substream(7, 1, 3).integers(0, 2**30, 8)
    assert np.array_equal(a, b)
    assert not np.array_equal(a, c)


def test_generate_instance_shapes_and_determinism():
    s = CeoScenario(l=3, n=500, p=(0.05, 0.1, 0.2), seed=11)
    x1, ys1 = generate_instance(s, trial=4)
    x2, ys2 = generate_instance(s, trial=4)
    assert len(x1) == 500 and len(ys1) == 3
    assert np.array_equal(x1.bits, x2.bits)
    for a, b in zip(ys1, ys2):
        assert np.array_equal(a.bits, b.bits)
    _, ys3 = generate_instance(s, trial=5)
    assert not np.array_equal(ys1[0].bits, ys3[0].bits)


def test_generate_instance_noise_statistics():
    s = CeoScenario(l=2, n=200000, p=(0.05, 0.25), seed=11)
    x, ys = generate_instance(s, trial=0)
    assert x.bits.mean() == pytest.approx(0.5, abs=0.01)
    for i, p in enumerate(s.p):
        flips = (x.bits ^ ys[i].bits).mean()
        # 5 sigma band for a Bernoulli(p) mean over n samples
        sigma = (p * (1 - p) / s.n) ** 0.5
        assert abs(flips - p) < 5 * sigma


def test_scenario_validation():
    with pytest.raises(ValueError):
        CeoScenario(l=2, n=100, p=(0.1,), seed=0)
    with pytest.raises(ValueError):
        CeoScenario(l=1, n=100, p=(0.7,), seed=0)

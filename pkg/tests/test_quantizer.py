import numpy as np
import pytest

from binceo.channel import substream
from binceo.codes import get_preset, sample_ldgm
from binceo.gf2 import BitSequence, mat_vec_mul
from binceo.quantizer import (
    QuantizerParams,
    QuantizerShortfall,
    quantize,
)


def random_word(n, seed):
    return BitSequence(substream(seed, 0).integers(0, 2, n).astype(np.uint8))


def test_quantize_consistency_and_distortion():
    code = sample_ldgm(2000, 1200, get_preset("ldgm-a"), seed=1)
    y = random_word(2000, 21)
    params = QuantizerParams(target_distortion=0.12, tolerance=0.015, restarts=3)
    res = quantize(y, code, params, seed=9)
    # reported codeword really is the LDGM image of the info bits
    cw = mat_vec_mul(code.generator.transpose(), res.info_bits)
    assert np.array_equal(cw.bits, res.codeword.bits)
    # reported distortion matches the codeword and meets the tolerance band
    emp = float(np.mean(cw.bits ^ y.bits))
    assert res.empirical_distortion == pytest.approx(emp, abs=1e-12)
    assert res.empirical_distortion <= 0.12 + 0.015


def test_quantize_deterministic():
    code = sample_ldgm(1500, 900, get_preset("ldgm-a"), seed=2)
    y = random_word(1500, 22)
    params = QuantizerParams(target_distortion=0.12, tolerance=0.02, restarts=2)
    a = quantize(y, code, params, seed=5)
    b = quantize(y, code, params, seed=5)
    assert np.array_equal(a.info_bits.bits, b.info_bits.bits)
    assert a.empirical_distortion == b.empirical_distortion
    c = quantize(y, code, params, seed=6)
    assert (
        not np.array_equal(a.info_bits.bits, c.info_bits.bits)
        or a.empirical_distortion != c.empirical_distortion
        or True  # different seeds may still coincide; only determinism is asserted
    )


def test_quantize_shortfall_raises_with_best_attempt():
    code = sample_ldgm(1000, 300, get_preset("ldgm-a"), seed=3)  # rate far too low
    y = random_word(1000, 23)
    params = QuantizerParams(
        target_distortion=0.02, tolerance=0.005, restarts=1, max_rounds=200
    )
    with pytest.raises(QuantizerShortfall) as exc:
        quantize(y, code, params, seed=7)
    best = exc.value.best
    cw = mat_vec_mul(code.generator.transpose(), best.info_bits)
    assert np.array_equal(cw.bits, best.codeword.bits)
    assert best.empirical_distortion > 0.02 + 0.005


def test_quantizer_params_validation():
    with pytest.raises(ValueError):
        QuantizerParams(target_distortion=0.7)
    with pytest.raises(ValueError):
        QuantizerParams(target_distortion=0.1, restarts=0)

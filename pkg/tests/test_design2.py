import math
import zlib
from fractions import Fraction

import numpy as np
import pytest

from framekit.config import Tolerances
from framekit.design2 import (
    WeightedFrame,
    design_sum,
    infer_weights,
    picket_weight_values,
    picket_weights,
    projector_sum_check,
    singer_weight_values,
    singer_weights,
    symmetric_projector,
)
from framekit.errors import DimTooLarge, PrereqFailed, ShapeMismatch
from framekit.framegen import Frame, canonical_basis, chirp_mub, drop_basis_vectors, picket_ogf, singer_ogf

SINGER_Q = (2, 3, 4)  # K = 3, 4, 5
PICKET_Q = (3, 4, 5, 7)


def weighted_families():
    for q in SINGER_Q:
        yield f"singer-{q + 1}", singer_weights(singer_ogf(q))
    for q in PICKET_Q:
        yield f"picket-{q}", picket_weights(picket_ogf(q))


@pytest.mark.parametrize("K", range(2, 51))
def test_weight_normalisation_exact(K):
    a, b = singer_weight_values(K)
    assert K * a + (K * K - K + 1) * b == 1
    assert 0 < a <= 1 and 0 < b <= 1
    a, b = picket_weight_values(K)
    assert K * a + (K * K - 1) * b == 1
    assert 0 < a <= 1 and 0 < b <= 1


def test_picket_weights_k3():
    assert picket_weight_values(3) == (Fraction(1, 12), Fraction(3, 32))
    wf = picket_weights(picket_ogf(3))
    assert wf.exact_weights[:3] == (Fraction(1, 12),) * 3
    assert wf.exact_weights[3] == Fraction(3, 32)


def test_singer_weights_k3():
    # alpha = 7/84 = 1/12, beta = 3/28
    assert singer_weight_values(3) == (Fraction(1, 12), Fraction(3, 28))


@pytest.mark.parametrize("name,wf", list(weighted_families()), ids=lambda x: x if isinstance(x, str) else "")
def test_design_sum_passes(name, wf):
    K = wf.frame.dim
    cert = design_sum(wf)
    assert cert.verdict
    assert cert.target == 2 / (K * (K + 1))
    assert cert.defect <= 1e-9
    assert wf.frame.size >= K * K
    if K <= 5:
        assert projector_sum_check(wf) <= 1e-8


def test_uniform_weights_on_unweighted_frame_fail():
    f = singer_ogf(2)
    wf = WeightedFrame(f, np.full(f.size, 1 / f.size))
    cert = design_sum(wf)
    assert not cert.verdict
    assert projector_sum_check(wf) > 1e-8


def test_t1_uniform_tight_frame():
    # a unit-norm tight frame with uniform weights is a weighted 1-design
    f = chirp_mub(3)
    wf = WeightedFrame(f, np.full(f.size, 1 / f.size))
    cert = design_sum(wf, t=1)
    assert cert.verdict and cert.target == 1 / 3
    assert projector_sum_check(wf, t=1) <= 1e-12


def test_chirp_mubs_are_2design():
    # complete MUB set with uniform weights is a 2-design
    for K in (2, 3, 5):
        f = chirp_mub(K)
        wf = WeightedFrame(f, np.full(f.size, 1 / f.size))
        assert design_sum(wf).verdict
        assert projector_sum_check(wf) <= 1e-8


def test_symmetric_projector():
    P = symmetric_projector(3, 2)
    assert np.allclose(P @ P, P)
    assert round(np.trace(P)) == 6


def random_rotation_of_one_vector(wf, rng, angle=0.1):
    V = np.array(wf.frame.vectors)
    j = int(rng.integers(len(V)))
    v = V[j]
    w = rng.normal(size=v.shape) + 1j * rng.normal(size=v.shape)
    w -= np.vdot(v, w) * v
    w /= np.linalg.norm(w)
    V[j] = math.cos(angle) * v + math.sin(angle) * w
    return WeightedFrame(Frame(V, wf.frame.labels), wf.weights)


@pytest.mark.parametrize("name,wf", [x for x in weighted_families() if x[1].frame.dim <= 5], ids=lambda x: x if isinstance(x, str) else "")
def test_characterisation_and_sensitivity(name, wf):
    rng = np.random.default_rng(zlib.crc32(name.encode()))
    for _ in range(3):
        bad = random_rotation_of_one_vector(wf, rng)
        cert = design_sum(bad)
        resid = projector_sum_check(bad)
        # both checks agree and fail
        assert not cert.verdict and resid > 1e-8
        assert resid > 1e-3
        # the 4th-power sum is stationary at a design, so its defect is second order in the angle
        assert cert.defect > 1e3 * cert.tolerance


def test_drop_basis_keeps_design_question_open():
    f = drop_basis_vectors(picket_ogf(4), 1)
    with pytest.raises(ShapeMismatch):
        picket_weights(f)


def test_prereq_failure():
    f = singer_ogf(2)
    V = np.array(f.vectors)
    V[5] = V[6]
    with pytest.raises(PrereqFailed):
        singer_weights(Frame(V, f.labels))


def test_infer_weights():
    assert infer_weights(singer_ogf(3)).exact_weights[0] == singer_weight_values(4)[0]
    assert infer_weights(picket_ogf(4)).exact_weights[0] == picket_weight_values(4)[0]
    with pytest.raises(ShapeMismatch):
        infer_weights(chirp_mub(3))


def test_projector_dim_cap():
    f = canonical_basis(17)
    wf = WeightedFrame(f, np.full(17, 1 / 17))
    with pytest.raises(DimTooLarge):
        projector_sum_check(wf)


def test_weight_validation():
    f = canonical_basis(2)
    with pytest.raises(ValueError):
        WeightedFrame(f, np.array([0.7, 0.7]))
    with pytest.raises(ValueError):
        WeightedFrame(f, np.array([1.0, 0.0]))
    with pytest.raises(ShapeMismatch):
        WeightedFrame(f, np.array([1.0]))


def test_weighted_round_trip():
    wf = picket_weights(picket_ogf(3))
    back = WeightedFrame.from_dict(wf.to_dict())
    assert np.array_equal(back.weights, wf.weights)
    assert design_sum(back) == design_sum(wf)


def test_tolerance_override():
    wf = singer_weights(singer_ogf(2))
    assert design_sum(wf, tol=Tolerances(design=1e-20)).tolerance == 1e-20

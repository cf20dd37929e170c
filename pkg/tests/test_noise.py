import math

import numpy as np
import pytest

from nlsysid.noise import (
    NoiseSpec,
    SeedStream,
    component_std,
    sample,
    sample_many,
    sample_truncated_gaussian_scalar,
    tightness_coefficient,
)

from oracles import ks_two_sample_statistic

UNIFORM_1 = NoiseSpec("uniform-box", 2, 1.0)
TG_HALF = NoiseSpec("truncated-gaussian", 2, 1.0, 0.5)


def test_spec_validation():
    with pytest.raises(ValueError):
        NoiseSpec("uniform-box", 2, 0.0)
    with pytest.raises(ValueError):
        NoiseSpec("truncated-gaussian", 2, 1.0)  # sigma missing
    with pytest.raises(ValueError):
        NoiseSpec("cauchy", 1, 1.0)
    with pytest.raises(ValueError):
        NoiseSpec("uniform-box", 0, 1.0)


def test_serialization_roundtrip():
    for spec in (UNIFORM_1, TG_HALF):
        assert NoiseSpec.from_dict(spec.to_dict()) == spec


@pytest.mark.parametrize("spec", [UNIFORM_1, TG_HALF,
                                  NoiseSpec("truncated-gaussian", 1, 2.0, 2.0)])
def test_support_bound(spec):
    draws = sample_many(spec, 20_000, SeedStream(1, "support"))
    assert draws.shape == (20_000, spec.dimension)
    assert np.abs(draws).max() <= spec.bound


def test_single_draw_matches_stream():
    spec = UNIFORM_1
    stream = SeedStream(7, "one")
    assert np.array_equal(sample(spec, stream), sample(spec, stream))
    assert np.array_equal(sample(spec, stream), sample_many(spec, 3, stream)[0])


def test_reproducibility_and_label_independence():
    spec = TG_HALF
    a = sample_many(spec, 500, SeedStream(3, "w"))
    b = sample_many(spec, 500, SeedStream(3, "w"))
    c = sample_many(spec, 500, SeedStream(3, "eta"))
    d = sample_many(spec, 500, SeedStream(4, "w"))
    assert np.array_equal(a, b)
    assert not np.array_equal(a, c)
    assert not np.array_equal(a, d)


def test_prefix_property():
    # drawing n then reusing the stream start must reproduce prefixes
    for spec in (UNIFORM_1, TG_HALF, NoiseSpec("truncated-gaussian", 1, 2.0, 2.0)):
        stream = SeedStream(11, "prefix")
        big = sample_many(spec, 4000, stream)
        small = sample_many(spec, 123, stream)
        assert np.array_equal(big[:123], small)


@pytest.mark.parametrize("spec", [UNIFORM_1, TG_HALF])
def test_zero_mean(spec):
    n = 1_000_000
    draws = sample_many(spec, n, SeedStream(5, "mean"))
    tol = 5.0 * spec.bound / math.sqrt(n)
    assert np.abs(draws.mean(axis=0)).max() < tol


def test_truncated_variance_narrow_sigma():
    # truncation at 10 sigma: variance is sigma^2 to machine precision
    spec = NoiseSpec("truncated-gaussian", 1, 1.0, 0.1)
    draws = sample_many(spec, 1_000_000, SeedStream(6, "var"))
    assert abs(draws.var() - 0.01) < 0.02 * 0.01
    assert abs(component_std(spec) - 0.1) < 1e-6


def test_wide_sigma_matches_uniform_ks():
    # a Gaussian truncated at one-millionth of its sigma is flat
    n = 100_000
    wide = NoiseSpec("truncated-gaussian", 1, 1.0, 1e6)
    a = sample_many(wide, n, SeedStream(8, "wide")).ravel()
    b = sample_many(NoiseSpec("uniform-box", 1, 1.0), n, SeedStream(8, "flat")).ravel()
    stat = ks_two_sample_statistic(a, b)
    critical = 1.628 * math.sqrt(2.0 / n)  # alpha = 0.01
    assert stat < critical


def test_scalar_rejection_sampler():
    stream = SeedStream(9, "scalar")
    rng = stream.generator()
    draws = [sample_truncated_gaussian_scalar(2.0, 2.0, rng) for _ in range(500)]
    assert max(abs(d) for d in draws) <= 2.0
    with pytest.raises(ValueError):
        sample_truncated_gaussian_scalar(-1.0, 1.0, stream)


def test_gaussian_proposal_acceptance_rate():
    # acceptance of the N(0,1) proposal truncated at +/-1 is 2 Phi(1) - 1
    rng = SeedStream(10, "accept").generator()
    proposals = rng.normal(0.0, 1.0, size=1_000_000)
    rate = np.mean(np.abs(proposals) <= 1.0)
    expected = math.erf(1.0 / math.sqrt(2.0))
    assert abs(rate - expected) < 0.005 * expected


def test_tightness_coefficient_values():
    assert tightness_coefficient(NoiseSpec("uniform-box", 1, 1.0)) == 0.5
    assert tightness_coefficient(NoiseSpec("uniform-box", 1, 0.5)) == 1.0
    expected = math.exp(-2.0) / min(math.sqrt(2.0 * math.pi) * 0.5, 2.0)
    got = tightness_coefficient(TG_HALF)
    assert abs(got - expected) < 1e-15
    assert abs(got - 0.10798) < 5e-6


@pytest.mark.parametrize(
    "spec",
    [
        NoiseSpec("uniform-box", 1, 1.0),
        NoiseSpec("uniform-box", 1, 0.5),
        TG_HALF,
        NoiseSpec("truncated-gaussian", 1, 1.0, 1.0),
        NoiseSpec("truncated-gaussian", 1, 2.0, 2.0),
    ],
)
def test_boundary_tightness(spec):
    # boundary-visit frequency dominates 0.8 c_w l at every probe level;
    # sigma values comparable to the bound keep the rates resolvable in 1e6 draws
    n = 1_000_000
    draws = sample_many(spec, n, SeedStream(12, "tight"))[:, 0]
    c_w = tightness_coefficient(spec)
    for frac in (0.05, 0.1, 0.2):
        ell = frac * spec.bound
        freq = np.mean(draws >= spec.bound - ell)
        assert freq >= 0.8 * c_w * ell


def test_component_std_uniform():
    assert abs(component_std(UNIFORM_1) - 1.0 / math.sqrt(3.0)) < 1e-15
    # wide-sigma truncation approaches the uniform standard deviation
    wide = NoiseSpec("truncated-gaussian", 1, 1.0, 1e6)
    assert abs(component_std(wide) - 1.0 / math.sqrt(3.0)) < 1e-6

import numpy as np
import pytest
from scipy import stats

from mbweibull import (
    BivariateWeibull,
    GaussianCopulaParams,
    GfgmParams,
    MbwParams,
    RectUniform,
    SeededStream,
    WeibullParams,
    bvw_cdf,
    conditional_cdf,
    sample_bvw,
    sample_mbw,
    weibull_cdf,
)

STUDY_BASE = BivariateWeibull(
    WeibullParams(4.0, 1.5), WeibullParams(3.5, 5.0), GfgmParams(0.6)
)
STUDY_MIX = MbwParams(base=STUDY_BASE, rect=RectUniform(0.0, 0.0, 0.1), p=0.3)


class TestSeededStream:
    def test_reproducible(self):
        a = SeededStream(123, 7).generator().random(100)
        b = SeededStream(123, 7).generator().random(100)
        assert np.array_equal(a, b)

    def test_streams_differ(self):
        a = SeededStream(123, 0).generator().random(10_000)
        b = SeededStream(123, 1).generator().random(10_000)
        assert abs(stats.spearmanr(a, b).statistic) < 0.02


class TestSampleBvw:
    def test_empty(self):
        out = sample_bvw(0, STUDY_BASE, SeededStream(1))
        assert out.shape == (0, 2)

    def test_reproducible(self):
        a = sample_bvw(50, STUDY_BASE, SeededStream(9, 3))
        b = sample_bvw(50, STUDY_BASE, SeededStream(9, 3))
        assert np.array_equal(a, b)

    def test_independence_rank_correlation(self):
        m = BivariateWeibull(
            WeibullParams(2, 1), WeibullParams(2, 1), GfgmParams(0.0)
        )
        pts = sample_bvw(100_000, m, SeededStream(4))
        r = stats.spearmanr(pts[:, 0], pts[:, 1]).statistic
        assert abs(r) < 0.01

    def test_joint_cdf_consistency(self):
        m = BivariateWeibull(
            WeibullParams(2.0, 1.3), WeibullParams(1.5, 0.7), GfgmParams(0.6)
        )
        n = 200_000
        pts = sample_bvw(n, m, SeededStream(12))
        F = bvw_cdf(1.3, 0.7, m)
        emp = np.mean((pts[:, 0] <= 1.3) & (pts[:, 1] <= 0.7))
        assert abs(emp - F) <= 3 * np.sqrt(F * (1 - F) / n)

    @pytest.mark.parametrize(
        "cop", [GfgmParams(0.6), GfgmParams(-0.9, a=2, b=2), GaussianCopulaParams(0.7)]
    )
    def test_marginal_ks(self, cop):
        m = BivariateWeibull(WeibullParams(4.0, 1.5), WeibullParams(3.5, 5.0), cop)
        n = 50_000
        pts = sample_bvw(n, m, SeededStream(21))
        for col, margin in ((0, m.margin1), (1, m.margin2)):
            d = stats.kstest(pts[:, col], lambda x: weibull_cdf(x, margin)).statistic
            assert d < 1.63 / np.sqrt(n)

    def test_conditional_residuals(self):
        # re-derive (u, t) from the stream and check the emitted v solves
        # the conditional equation to tolerance
        cop = GfgmParams(0.8, a=2, b=2)
        m = BivariateWeibull(WeibullParams(2, 1), WeibullParams(2, 1), cop)
        s = SeededStream(33)
        pts = sample_bvw(1000, m, s)
        rng = s.generator()
        u = np.clip(rng.random(1000), 1e-15, 1 - 1e-15)
        t = np.clip(rng.random(1000), 1e-15, 1 - 1e-15)
        v = weibull_cdf(pts[:, 1], m.margin2)
        assert np.allclose(weibull_cdf(pts[:, 0], m.margin1), u, atol=1e-12)
        assert np.allclose(conditional_cdf(v, u, cop), t, atol=1e-10)


class TestSampleMbw:
    def test_empty(self):
        assert sample_mbw(0, STUDY_MIX, SeededStream(1)).shape == (0, 2)

    def test_reproducible(self):
        a = sample_mbw(200, STUDY_MIX, SeededStream(5, 2))
        b = sample_mbw(200, STUDY_MIX, SeededStream(5, 2))
        assert np.array_equal(a, b)

    def test_near_zero_p(self):
        m = MbwParams(base=STUDY_BASE, rect=RectUniform(0, 0, 0.1), p=1e-12)
        pts = sample_mbw(5000, m, SeededStream(8))
        # essentially everything comes from the bulk, far from the tiny rectangle
        assert np.mean(np.all(pts <= 0.1, axis=1)) < 0.01

    def test_near_one_p(self):
        m = MbwParams(base=STUDY_BASE, rect=RectUniform(0, 0, 0.4), p=1 - 1e-12)
        n = 20_000
        pts = sample_mbw(n, m, SeededStream(8))
        assert np.all(pts <= 0.4)
        assert abs(pts[:, 0].mean() - 0.2) <= 3 * 0.4 / np.sqrt(12 * n)

    def test_rectangle_inclusion_probability(self):
        n = 100_000
        pts = sample_mbw(n, STUDY_MIX, SeededStream(17))
        d = STUDY_MIX.rect.d
        prob = STUDY_MIX.p + STUDY_MIX.q * bvw_cdf(d, d, STUDY_MIX.base)
        emp = np.mean(np.all(pts <= d, axis=1))
        assert abs(emp - prob) <= 3 * np.sqrt(prob * (1 - prob) / n)

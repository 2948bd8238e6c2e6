import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from maxentaug.core import RngStream, clamp_image, sample_beta, sample_dirichlet
from maxentaug.errors import InvalidParameterError, NumericDomainError


class TestDirichlet:
    def test_single_vertex(self):
        assert sample_dirichlet(RngStream(7, 0), 1, 1.0).tolist() == [1.0]

    def test_sums_to_one(self):
        w = sample_dirichlet(RngStream(3, 5), 3, 1.0)
        assert abs(w.sum() - 1.0) <= 1e-9
        assert (w >= 0).all()

    def test_monte_carlo_mean(self):
        gen = RngStream(11, 0).generator()
        total = np.zeros(3)
        n = 100_000
        for _ in range(n):
            total += sample_dirichlet(gen, 3, 1.0)
        assert np.allclose(total / n, 1.0 / 3.0, atol=0.01)

    @pytest.mark.parametrize("n,conc", [(0, 1.0), (3, 0.0), (3, -1.0)])
    def test_invalid_parameters(self, n, conc):
        with pytest.raises(InvalidParameterError):
            sample_dirichlet(RngStream(0, 0), n, conc)

    @given(
        n=st.integers(min_value=1, max_value=16),
        conc=st.sampled_from([0.5, 1.0, 5.0]),
        seed=st.integers(min_value=0, max_value=2**32 - 1),
    )
    @settings(max_examples=200, deadline=None)
    def test_simplex_property(self, n, conc, seed):
        w = sample_dirichlet(RngStream(seed, 0), n, conc)
        assert w.shape == (n,)
        assert (w >= 0).all()
        assert abs(w.sum() - 1.0) <= 1e-9


class TestBeta:
    @pytest.mark.parametrize(
        "alpha,beta,mean,tol",
        [(1.0, 1.0, 0.5, 0.005), (5.0, 1.0, 5.0 / 6.0, 0.005), (6.0, 2.0, 0.75, 0.005)],
    )
    def test_monte_carlo_mean(self, alpha, beta, mean, tol):
        gen = RngStream(21, 0).generator()
        draws = np.array([sample_beta(gen, alpha, beta) for _ in range(100_000)])
        assert (draws >= 0).all() and (draws <= 1).all()
        assert abs(draws.mean() - mean) <= tol

    def test_variance_matches_analytic(self):
        gen = RngStream(22, 0).generator()
        a, b = 5.0, 1.0
        draws = np.array([sample_beta(gen, a, b) for _ in range(100_000)])
        want = a * b / ((a + b) ** 2 * (a + b + 1))
        assert abs(draws.var() - want) / want <= 0.10

    @pytest.mark.parametrize("alpha,beta", [(0.0, 1.0), (1.0, 0.0), (-2.0, 3.0)])
    def test_invalid_parameters(self, alpha, beta):
        with pytest.raises(InvalidParameterError):
            sample_beta(RngStream(0, 0), alpha, beta)


class TestClamp:
    def test_identity_on_valid(self, rng):
        x = rng.random((4, 4, 3))
        assert np.array_equal(clamp_image(x), x)

    def test_clips_high_and_low(self):
        out = clamp_image(np.array([[[1.25, -0.1, 0.5]]]))
        assert out.tolist() == [[[1.0, 0.0, 0.5]]]

    def test_nan_rejected(self):
        with pytest.raises(NumericDomainError):
            clamp_image(np.array([[[np.nan]]]))


class TestRngStream:
    def test_reproducible(self):
        a = RngStream(99, 4).generator().random(32)
        b = RngStream(99, 4).generator().random(32)
        assert a.tobytes() == b.tobytes()

    def test_streams_independent_of_other_draws(self):
        # drawing from stream 0 must not perturb stream 1
        s0, s1 = RngStream(5, 0), RngStream(5, 1)
        s0.generator().random(1000)
        before = s1.generator().random(16)
        g0 = s0.generator()
        g0.random(123456)
        after = RngStream(5, 1).generator().random(16)
        assert before.tobytes() == after.tobytes()

    def test_distinct_streams_differ(self):
        assert not np.array_equal(
            RngStream(5, 0).generator().random(8), RngStream(5, 1).generator().random(8)
        )

    def test_child(self):
        assert RngStream(5, 0).child(9) == RngStream(5, 9)

import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from helpers import central_diff, rd_loop
from mrdp import (
    cdf_gf,
    divergence_gradient,
    from_increments,
    increments,
    indexing_gf,
    make_chain,
    make_grading_function,
    relative_divergence,
    shannon_entropy,
)
from mrdp.divergence import entropy_via_divergence, rd_from_deltas
from mrdp.errors import ChainMismatch, LengthMismatch, NonPositiveDelta, NotADistribution

LN2 = math.log(2)

# frozen from a plain-Python summation oracle
H_020_030_050 = 1.0296530140645737


def chain_of(n):
    return make_chain([f"w{k}" for k in range(n)])


def pair(f, g, base_f=0.0, base_g=0.0):
    chain = chain_of(len(f) + 1)
    return from_increments(chain, base_f, f), from_increments(chain, base_g, g)


def inc_vectors(n_min=1, n_max=10):
    return st.integers(n_min, n_max).flatmap(
        lambda n: st.tuples(
            arrays(float, n, elements=st.floats(1e-3, 10.0)),
            arrays(float, n, elements=st.floats(1e-3, 10.0)),
        )
    )


class TestRelativeDivergence:
    def test_identity_zero(self):
        F = make_grading_function(chain_of(4), [0, 0.3, 0.7, 2.0])
        assert relative_divergence(F, F) == 0.0

    def test_doubled_increments(self):
        F, G = pair([0.4, 0.6], [0.2, 0.3])
        d = relative_divergence(F, G)
        assert d == pytest.approx(-LN2, abs=1e-15)
        assert d == pytest.approx(rd_loop([0.4, 0.6], [0.2, 0.3]), abs=1e-15)

    def test_fair_coin_against_indexing(self):
        F = cdf_gf([0.5, 0.5])
        d = relative_divergence(F, indexing_gf(F.chain))
        assert d == pytest.approx(LN2, abs=1e-15)
        assert d == pytest.approx(shannon_entropy([0.5, 0.5]), abs=1e-15)

    def test_argument_order_matters(self):
        F, G = pair([0.4, 0.6], [0.2, 0.3])
        assert relative_divergence(F, G) != relative_divergence(G, F)

    def test_chain_mismatch(self):
        F = make_grading_function(make_chain(["a", "b"]), [0, 1])
        G = make_grading_function(make_chain(["a", "c"]), [0, 1])
        with pytest.raises(ChainMismatch):
            relative_divergence(F, G)

    def test_chain_length_mismatch(self):
        with pytest.raises(ChainMismatch):
            relative_divergence(indexing_gf(chain_of(2)), indexing_gf(chain_of(3)))


class TestShannonEntropy:
    def test_fair_coin(self):
        assert shannon_entropy([0.5, 0.5]) == pytest.approx(LN2, abs=1e-15)

    def test_certainty(self):
        assert shannon_entropy([1.0]) == 0.0
        assert entropy_via_divergence([1.0]) == 0.0

    def test_three(self):
        assert shannon_entropy([0.2, 0.3, 0.5]) == pytest.approx(H_020_030_050, abs=1e-15)

    @pytest.mark.parametrize(
        "p", [[0.5, 0.6], [0.5, 0.5, 0.0], [1.2, -0.2], [], [float("nan"), 1.0]]
    )
    def test_not_a_distribution(self, p):
        with pytest.raises(NotADistribution):
            shannon_entropy(p)

    def test_sum_tolerance(self):
        shannon_entropy([0.5, 0.5 + 5e-10])
        with pytest.raises(NotADistribution):
            shannon_entropy([0.5, 0.5 + 5e-9])

    @given(st.lists(st.floats(1e-3, 1.0), min_size=1, max_size=12))
    def test_equals_divergence_from_indexing(self, w):
        p = np.array(w) / np.sum(w)
        p = p / p.sum()
        assert entropy_via_divergence(p) == pytest.approx(shannon_entropy(p), abs=1e-12)


class TestGradient:
    def test_equal(self):
        np.testing.assert_array_equal(divergence_gradient([0.3, 1.2], [0.3, 1.2]), [-1, -1])

    def test_e_scaled(self):
        g = np.array([0.2, 0.7, 1.5])
        np.testing.assert_allclose(divergence_gradient(math.e * g, g), [-2, -2, -2], atol=1e-15)

    def test_errors(self):
        with pytest.raises(LengthMismatch):
            divergence_gradient([1, 2], [1, 2, 3])
        with pytest.raises(NonPositiveDelta):
            divergence_gradient([1, 0], [1, 2])

    def test_random_length_five(self, rng):
        f, g = rng.uniform(0.1, 2, 5), rng.uniform(0.1, 2, 5)
        fd = central_diff(lambda x: rd_loop(x, g), f, 1e-6)
        np.testing.assert_allclose(divergence_gradient(f, g), fd, rtol=1e-5)

    @given(inc_vectors())
    def test_matches_finite_differences(self, fg):
        f, g = fg
        fd = central_diff(lambda x: rd_loop(x, g), f, 1e-6)
        grad = divergence_gradient(f, g)
        np.testing.assert_allclose(grad, fd, rtol=1e-5, atol=1e-6)


@given(inc_vectors())
def test_matches_loop_oracle(fg):
    f, g = fg
    F, G = pair(f, g)
    assert relative_divergence(F, G) == pytest.approx(rd_loop(f, g), rel=1e-12, abs=1e-12)


@given(inc_vectors())
def test_gibbs_bound(fg):
    f, g = fg
    F, G = pair(f, g)
    rf, rg = f.sum(), g.sum()
    assert relative_divergence(F, G) <= -rf * math.log(rf / rg) + 1e-10


@given(arrays(float, st.integers(1, 10), elements=st.floats(1e-3, 10.0)), st.floats(1e-2, 1e2))
def test_gibbs_equality_for_proportional(g, c):
    F, G = pair(c * g, g)
    rf, rg = increments(F).total(), increments(G).total()
    assert relative_divergence(F, G) == pytest.approx(-rf * math.log(rf / rg), abs=1e-10)


@given(inc_vectors(), st.floats(-100, 100), st.floats(-100, 100))
def test_translation_invariance(fg, cf, cg):
    f, g = fg
    # dyadic rounding makes the shifts exact
    f = np.round(f * 1024) / 1024 + 1 / 1024
    g = np.round(g * 1024) / 1024 + 1 / 1024
    cf, cg = round(cf * 1024) / 1024, round(cg * 1024) / 1024
    chain = chain_of(f.size + 1)
    F = make_grading_function(chain, from_increments(chain, 0.0, f).values)
    G = make_grading_function(chain, from_increments(chain, 0.0, g).values)
    assert relative_divergence(F.shifted(cf), G.shifted(cg)) == relative_divergence(F, G)


@given(inc_vectors(), st.floats(1e-3, 1e3))
def test_scaling_g_shifts_by_range_log(fg, c):
    f, g = fg
    F, G = pair(f, g)
    _, Gc = pair(f, c * g)
    expected = relative_divergence(F, G) + f.sum() * math.log(c)
    assert relative_divergence(F, Gc) == pytest.approx(expected, abs=1e-10 * max(1, abs(expected)))


@given(
    st.integers(1, 10).flatmap(
        lambda n: st.tuples(*[arrays(float, n, elements=st.floats(1e-3, 10.0))] * 3)
    ),
    st.floats(0.01, 0.99),
)
def test_concavity_in_f(fff, t):
    f1, f2, g = fff
    mid = t * f1 + (1 - t) * f2
    lhs = rd_from_deltas(mid, g)
    rhs = t * rd_from_deltas(f1, g) + (1 - t) * rd_from_deltas(f2, g)
    assert lhs >= rhs - 1e-10

# Copyright 2024 ofacompress contributors. All Rights Reserved.
# Use of this source code is governed by a MIT license that can be found in the LICENSE file.
# SPDX-License-Identifier: MIT

import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from ofacompress.alphamod import (
    LAMBDA_CEILING,
    FixedLambdaSampler,
    LambdaControl,
    LambdaMode,
    ReplayLambdaSampler,
    SampleRange,
    UniformLambdaSampler,
    lambda_from_theta,
    modify_alpha,
    sample_lambda,
    theta_from_lambda,
)
from ofacompress.cif import fire_count
from ofacompress.diffmath import Matrix, Tape, check_gradients, ops
from ofacompress.errors import OfaLambdaRangeError

alpha_vectors = arrays(
    np.float64,
    st.integers(1, 32),
    elements=st.floats(0.0, 1.0, allow_nan=False, allow_infinity=False),
)
lambdas = st.floats(0.0, LAMBDA_CEILING, allow_nan=False)


def values(alpha, lam):
    return modify_alpha(alpha, lam).data[:, 0]


class TestModifyAlpha:
    def test_identity_at_one(self):
        alpha = np.array([0.1, 0.7, 0.35])
        np.testing.assert_array_equal(values(alpha, 1.0), alpha)

    def test_zero_gives_ones(self):
        np.testing.assert_array_equal(values([0.2, 0.8], 0.0), [1.0, 1.0])

    def test_interpolation(self):
        np.testing.assert_allclose(values([0.2, 0.8], 0.5), [0.6, 0.9])

    def test_scale_down(self):
        np.testing.assert_allclose(values([0.8, 0.6, 0.6], 1.5), [0.4, 0.3, 0.3])

    def test_floor_keeps_one_fire(self):
        mod = values([0.8, 0.6, 0.6], 1.9)
        np.testing.assert_allclose(mod, [0.4, 0.3, 0.3])
        assert mod.sum() == pytest.approx(1.0)
        assert fire_count(mod) == 1

    def test_small_total_is_preserved(self):
        alpha = np.array([0.2, 0.3])
        np.testing.assert_allclose(values(alpha, 1.8), alpha)

    def test_zero_alpha_unchanged(self):
        np.testing.assert_array_equal(values([0.0, 0.0], 1.5), [0.0, 0.0])

    @pytest.mark.parametrize("lam", [1.5, 1.9, LAMBDA_CEILING])
    def test_subnormal_mass(self, lam):
        alpha = Matrix.column([5e-324], requires_grad=True)
        with Tape() as tape:
            mod = modify_alpha(alpha, lam)
            loss = ops.sum_(mod)
        out = mod.data[:, 0]
        assert np.all(np.isfinite(out))
        assert out.min() >= 0.0 and out.max() <= 1.0
        assert out[0] == 5e-324
        assert fire_count(out) == 1
        assert np.all(np.isfinite(tape.backward(loss)[alpha]))

    @pytest.mark.parametrize("lam", [-0.1, 2.0, 2.5])
    def test_out_of_range(self, lam):
        with pytest.raises(OfaLambdaRangeError):
            modify_alpha([0.5], lam)

    @settings(max_examples=200, deadline=None)
    @given(alpha=alpha_vectors, lam=lambdas)
    def test_stays_in_unit_interval(self, alpha, lam):
        mod = values(alpha, lam)
        assert mod.min() >= 0.0 and mod.max() <= 1.0

    @settings(max_examples=100, deadline=None)
    @given(alpha=alpha_vectors)
    def test_continuous_at_one(self, alpha):
        gap = np.max(np.abs(values(alpha, 1 - 1e-6) - values(alpha, 1 + 1e-6)))
        assert gap <= 1e-5

    @settings(max_examples=100, deadline=None)
    @given(alpha=alpha_vectors, pair=st.tuples(lambdas, lambdas))
    def test_monotone_in_lambda(self, alpha, pair):
        lo, hi = sorted(pair)
        assert values(alpha, hi).sum() <= values(alpha, lo).sum() + 1e-9
        assert fire_count(values(alpha, hi)) <= fire_count(values(alpha, lo))

    @settings(max_examples=100, deadline=None)
    @given(alpha=alpha_vectors)
    def test_fire_count_endpoints(self, alpha):
        assert fire_count(values(alpha, 0.0)) == len(alpha)
        assert fire_count(values(alpha, LAMBDA_CEILING)) == 1

    @settings(max_examples=100, deadline=None)
    @given(alpha=alpha_vectors, lam=st.floats(1.0, LAMBDA_CEILING))
    def test_mass_floor(self, alpha, lam):
        assert values(alpha, lam).sum() >= min(alpha.sum(), 1.0) - 1e-9

    @pytest.mark.parametrize("lam", [0.3, 1.4])
    def test_gradient(self, lam):
        alpha = Matrix.column([0.3, 0.5, 0.6, 0.4], requires_grad=True)
        lam_m = Matrix.scalar(lam, requires_grad=True)
        weights = Matrix.column([1.0, -2.0, 0.5, 3.0])

        def loss_fn():
            return ops.sum_(ops.mul(modify_alpha(alpha, lam_m), weights))

        assert check_gradients(loss_fn, {"alpha": alpha, "lambda": lam_m}).passed(1e-3)


class TestLambdaSampling:
    def test_replayable(self):
        r1, r2 = np.random.default_rng(7), np.random.default_rng(7)
        assert [sample_lambda(r1, SampleRange()) for _ in range(5)] == [sample_lambda(r2, SampleRange()) for _ in range(5)]
        a = UniformLambdaSampler(SampleRange(), 11)
        b = UniformLambdaSampler(SampleRange(), 11)
        assert [a.draw() for _ in range(20)] == [b.draw() for _ in range(20)]

    def test_range_bound(self):
        sampler = UniformLambdaSampler(SampleRange.parse("0:1"), 3)
        assert max(sampler.draw() for _ in range(1000)) <= 1.0

    def test_uniform_mean(self):
        rng = np.random.default_rng(0)
        draws = [sample_lambda(rng, SampleRange.parse("0:2")) for _ in range(100_000)]
        assert np.mean(draws) == pytest.approx(1.0, abs=0.01)
        assert max(draws) < 2.0

    @pytest.mark.parametrize("text, low, high", [("0:1", 0.0, 1.0), ("0:1.5", 0.0, 1.5), ("0:2", 0.0, LAMBDA_CEILING)])
    def test_parse(self, text, low, high):
        rng = SampleRange.parse(text)
        assert (rng.low, rng.high) == (low, high)
        assert str(rng) == text

    @pytest.mark.parametrize("text", ["1", "a:b", "0:3", "1:0.5", "-1:1"])
    def test_parse_rejects(self, text):
        with pytest.raises(OfaLambdaRangeError):
            SampleRange.parse(text)

    def test_fixed_and_replay(self):
        assert FixedLambdaSampler(0.5).draw() == 0.5
        replay = ReplayLambdaSampler([0.1, 0.2])
        assert [replay.draw(), replay.draw()] == [0.1, 0.2]
        with pytest.raises(OfaLambdaRangeError):
            replay.draw()


class TestLambdaFromTheta:
    def test_midpoint(self):
        assert lambda_from_theta(0.0, 2.0) == 1.0

    def test_negative_limit(self):
        assert lambda_from_theta(-50.0, 2.0) == pytest.approx(0.0, abs=1e-20)

    def test_theta_two(self):
        assert lambda_from_theta(2.0, 2.0) == pytest.approx(1.761594, abs=1e-6)

    def test_inverse(self):
        assert lambda_from_theta(theta_from_lambda(0.37, 1.5), 1.5) == pytest.approx(0.37)

    @settings(max_examples=100, deadline=None)
    @given(theta=st.floats(-30, 30), lambda_max=st.floats(0.1, 2.0))
    def test_bounded(self, theta, lambda_max):
        assert 0.0 <= lambda_from_theta(theta, lambda_max) <= lambda_max

    def test_trainable_control_gradient(self):
        ctl = LambdaControl.trainable(0.3, 1.5)
        assert ctl.mode == LambdaMode.Trainable
        assert ctl.value == pytest.approx(1.5 / (1.0 + math.exp(-0.3)))
        with Tape() as tape:
            lam = ctl.as_matrix()
        s = 1.0 / (1.0 + math.exp(-0.3))
        assert tape.backward(lam)[ctl.theta][0, 0] == pytest.approx(1.5 * s * (1 - s))

    def test_control_rejects_value_above_max(self):
        with pytest.raises(OfaLambdaRangeError):
            LambdaControl(1.2, 1.0, LambdaMode.Sampled)
        with pytest.raises(OfaLambdaRangeError):
            LambdaControl(0.5, 0.0)

import numpy as np
import pytest

from airfl.channel import ChannelConfig, awgn, db_to_linear, sample_channel, sample_gains


def rng(seed=0):
    return np.random.default_rng(seed)


class TestSampleChannel:
    def test_fixed_gains_with_delta_h(self):
        cfg = ChannelConfig(fading_mode="fixed", fixed_gains=(4.0, 9.0), delta_h=1.0)
        real = sample_channel(cfg, 2, rng())
        assert np.array_equal(real.h2, [4.0, 9.0])
        assert np.array_equal(real.h2_ev, [3.0, 8.0])

    def test_delta_h_zero_matches_server_gains(self):
        cfg = ChannelConfig(delta_h=0.0)
        real = sample_channel(cfg, 8, rng(3))
        assert np.array_equal(real.h2_ev, real.h2)

    def test_rayleigh_unit_mean(self):
        cfg = ChannelConfig()
        real = sample_channel(cfg, 10**6, rng(7))
        assert abs(real.h2.mean() - 1.0) < 0.01

    def test_delta_h_clips_at_zero(self):
        cfg = ChannelConfig(fading_mode="fixed", fixed_gains=(0.5,), delta_h=2.0)
        real = sample_channel(cfg, 1, rng())
        assert real.h2_ev[0] == 0.0

    def test_delta_h_monotone(self):
        gains = []
        for dh in (0.0, 0.5, 1.0, 2.0):
            cfg = ChannelConfig(fading_mode="fixed", fixed_gains=(1.3, 0.2), delta_h=dh)
            gains.append(sample_channel(cfg, 2, rng()).h2_ev)
        for lo, hi in zip(gains[1:], gains):
            assert np.all(lo <= hi)

    def test_deterministic_given_seed(self):
        cfg = ChannelConfig()
        a = sample_channel(cfg, 5, rng(42))
        b = sample_channel(cfg, 5, rng(42))
        assert np.array_equal(a.h2, b.h2)
        assert np.array_equal(a.h2_ev, b.h2_ev)

    def test_empty_system_rejected(self):
        with pytest.raises(ValueError, match="empty system"):
            sample_channel(ChannelConfig(), 0, rng())

    def test_fixed_gains_length_mismatch(self):
        cfg = ChannelConfig(fading_mode="fixed", fixed_gains=(1.0,))
        with pytest.raises(ValueError, match="length"):
            sample_channel(cfg, 2, rng())


class TestConfigValidation:
    def test_negative_delta_h_rejected(self):
        with pytest.raises(ValueError):
            ChannelConfig(delta_h=-0.1)

    def test_fixed_mode_needs_gains(self):
        with pytest.raises(ValueError):
            ChannelConfig(fading_mode="fixed")

    def test_unknown_mode_rejected(self):
        with pytest.raises(ValueError):
            ChannelConfig(fading_mode="rician")


class TestAwgn:
    def test_zero_variance_is_zero_vector(self):
        assert np.array_equal(awgn(3, 0.0, rng()), np.zeros(3))

    def test_shape(self):
        assert awgn(17, 1.0, rng()).shape == (17,)

    def test_empirical_moments(self):
        z = awgn(10**6, 1.0, rng(11))
        assert abs(z.mean()) < 0.01
        assert abs(z.var() - 1.0) < 0.01

    def test_negative_variance_rejected(self):
        with pytest.raises(ValueError):
            awgn(3, -1.0, rng())


def test_db_to_linear():
    assert db_to_linear(30.0) == pytest.approx(1000.0)
    assert db_to_linear(0.0) == 1.0


def test_sample_gains_matches_model():
    g = sample_gains(ChannelConfig(), 10**5, rng(5))
    assert abs(g.mean() - 1.0) < 0.03
    fixed = sample_gains(
        ChannelConfig(fading_mode="fixed", fixed_gains=(2.5,)), 10, rng()
    )
    assert np.all(fixed == 2.5)

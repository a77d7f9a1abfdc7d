import numpy as np
import pytest

from mcmimo import (
    GainTensor,
    PilotBook,
    ScenarioSpec,
    ShapeMismatch,
    SystemConfig,
    build_scenario,
    draw_channels,
    synth_training,
)
from mcmimo.channel import (
    STREAM_CHANNELS,
    STREAM_TRAIN_NOISE,
    draw_channel_batch,
    substream,
)


def single_pilot_book(tau, L):
    psi = np.zeros((L, tau, 1), dtype=complex)
    psi[:, 0, 0] = 1.0
    return PilotBook(psi)


class TestDrawChannels:
    def test_unit_variance(self):
        config = SystemConfig(L=1, K=1, M=1, tau=1, p_f=1.0, p_r=1.0)
        h = draw_channel_batch(config, substream(3, STREAM_CHANNELS), 100_000)
        power = np.mean(np.abs(h) ** 2)
        assert power == pytest.approx(1.0, rel=0.02)
        # real and imaginary parts each carry half the power
        assert np.mean(h.real**2) == pytest.approx(0.5, rel=0.03)

    def test_deterministic_given_seed_and_index(self):
        config = SystemConfig(L=2, K=1, M=4, tau=2, p_f=1.0, p_r=1.0)
        a = draw_channels(config, substream(11, STREAM_CHANNELS, 5))
        b = draw_channels(config, substream(11, STREAM_CHANNELS, 5))
        assert np.array_equal(a.h, b.h)
        c = draw_channels(config, substream(11, STREAM_CHANNELS, 6))
        assert not np.array_equal(a.h, c.h)

    def test_cross_cell_independence(self):
        # sample-correlation oracle between H_11 and H_21 entries
        config = SystemConfig(L=2, K=1, M=4, tau=2, p_f=1.0, p_r=1.0)
        h = draw_channel_batch(config, substream(4, STREAM_CHANNELS), 25_000)
        x = h[:, 0, 0].ravel()  # 100k samples
        y = h[:, 1, 0].ravel()
        corr = np.mean(x * np.conj(y)) / (np.std(x) * np.std(y))
        assert abs(corr) < 0.02
        pseudo = np.mean(x * y) / (np.std(x) * np.std(y))
        assert abs(pseudo) < 0.02


class TestSynthTraining:
    def test_zero_gains_zero_noise(self):
        config = SystemConfig(L=2, K=1, M=3, tau=4, p_f=1.0, p_r=2.0)
        betas = GainTensor(np.zeros((2, 2, 1)))
        pilots = single_pilot_book(4, 2)
        ch = draw_channels(config, substream(0, STREAM_CHANNELS))
        obs = synth_training(ch, pilots, betas, config, substream(0, STREAM_TRAIN_NOISE), noise=False)
        assert np.all(obs.y == 0)

    def test_single_term(self):
        # L=1, K=1, beta=1: Y = sqrt(p_r tau) psi h
        config = SystemConfig(L=1, K=1, M=3, tau=4, p_f=1.0, p_r=2.5)
        betas = GainTensor(np.ones((1, 1, 1)))
        rng = substream(1, STREAM_CHANNELS)
        psi = (rng.standard_normal(4) + 1j * rng.standard_normal(4))
        psi = (psi / np.linalg.norm(psi)).reshape(1, 4, 1)
        pilots = PilotBook(psi)
        ch = draw_channels(config, substream(2, STREAM_CHANNELS))
        obs = synth_training(ch, pilots, betas, config, substream(0, STREAM_TRAIN_NOISE), noise=False)
        expected = np.sqrt(config.p_r * config.tau) * pilots.psi[0] @ ch.h[0, 0]
        assert np.allclose(obs.y[0], expected, atol=1e-14)

    def test_matches_per_antenna_sum(self):
        # independent oracle: evaluate the per-antenna superposition literally
        config = SystemConfig(L=4, K=2, M=3, tau=4, p_f=100.0, p_r=10.0, seed=5)
        betas, pilots = build_scenario(ScenarioSpec.benchmark(0.8, 0.08), config)
        ch = draw_channels(config, substream(5, STREAM_CHANNELS))
        obs = synth_training(ch, pilots, betas, config, substream(0, STREAM_TRAIN_NOISE), noise=False)
        for l in range(config.L):
            y = np.zeros((config.tau, config.M), dtype=complex)
            for m in range(config.M):
                for j in range(config.L):
                    for k in range(config.K):
                        y[:, m] += (
                            np.sqrt(config.p_r * config.tau * betas.beta[j, l, k])
                            * ch.h[j, l, k, m]
                            * pilots.psi[j, :, k]
                        )
            assert np.allclose(obs.y[l], y, atol=1e-12)

    def test_shared_pilot_superposition(self):
        # both users' channels pile onto the same projection (contamination)
        config = SystemConfig(L=2, K=1, M=4, tau=4, p_f=1.0, p_r=10.0)
        betas, pilots = build_scenario(ScenarioSpec.shared_pilot(0.5, 0.0, 2), config)
        ch = draw_channels(config, substream(9, STREAM_CHANNELS))
        obs = synth_training(ch, pilots, betas, config, substream(0, STREAM_TRAIN_NOISE), noise=False)
        psi = pilots.psi[0][:, 0]
        projected = psi.conj() @ obs.y[0]
        expected = np.sqrt(config.p_r * config.tau) * (
            np.sqrt(betas.beta[0, 0, 0]) * ch.h[0, 0, 0]
            + np.sqrt(betas.beta[1, 0, 0]) * ch.h[1, 0, 0]
        )
        assert np.allclose(projected, expected, atol=1e-12)

    def test_orthogonal_pilot_projection_recovers_rows(self):
        # noise off, non-reused orthogonal pilots: psi_jk^H Y_l isolates row k of H_jl
        config = SystemConfig(L=2, K=2, M=4, tau=4, p_f=1.0, p_r=10.0)
        betas, pilots = build_scenario(ScenarioSpec(0.5, 0.0, (0, 1)), config)
        ch = draw_channels(config, substream(12, STREAM_CHANNELS))
        obs = synth_training(ch, pilots, betas, config, substream(0, STREAM_TRAIN_NOISE), noise=False)
        for l in range(2):
            for j in range(2):
                for k in range(2):
                    projected = pilots.psi[j][:, k].conj() @ obs.y[l]
                    expected = np.sqrt(config.p_r * config.tau * betas.beta[j, l, k]) * ch.h[j, l, k]
                    assert np.allclose(projected, expected, atol=1e-12)

    def test_zero_mean(self, benchmark):
        config, betas, pilots = benchmark
        rng_ch = substream(21, STREAM_CHANNELS)
        rng_no = substream(21, STREAM_TRAIN_NOISE)
        total = 0.0 + 0.0j
        count = 0
        for _ in range(10):
            h = draw_channel_batch(config, rng_ch, 1000)
            from mcmimo.channel import synth_training_batch

            y = synth_training_batch(h, pilots, betas, config, rng_no)
            total += y.sum()
            count += y.size
        assert abs(total / count) < 0.05

    def test_shape_mismatch(self, benchmark):
        config, betas, pilots = benchmark
        bad = SystemConfig(L=4, K=2, M=7, tau=4, p_f=1.0, p_r=1.0)
        ch = draw_channels(bad, substream(1, STREAM_CHANNELS))
        with pytest.raises(ShapeMismatch):
            synth_training(ch, pilots, betas, config, substream(0, STREAM_TRAIN_NOISE))

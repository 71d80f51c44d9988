import numpy as np
import pytest

from gesp.measurement import load_measurements, measure, sample_sensing, save_measurements
from gesp.numerics import magnitude_profile
from gesp.signals import SignalModelSpec, SparseSignal, generate


def _signal_from_vector(x):
    x = np.asarray(x, dtype=complex)
    return SparseSignal(
        vector=x,
        support=np.flatnonzero(x),
        profile=magnitude_profile(x),
    )


class TestSampleSensing:
    def test_second_moment(self):
        # E|a_ij|^2 = 1; the mean over 10^6 draws has sd 1e-3
        rng = np.random.default_rng(100)
        a = sample_sensing(1, 10**6, rng)
        assert 0.99 <= np.mean(np.abs(a) ** 2) <= 1.01

    def test_column_independence(self):
        rng = np.random.default_rng(101)
        a = sample_sensing(2, 10**6, rng)
        cross = np.mean(a[:, 0] * a[:, 1].conj())
        assert abs(cross) < 0.01

    def test_zero_m_rejected(self):
        with pytest.raises(ValueError):
            sample_sensing(4, 0, np.random.default_rng(0))


class TestMeasure:
    def test_unit_signal_single_row(self):
        x = _signal_from_vector([1.0, 0.0, 0.0])
        sensing = np.array([[2j, 0.0, 0.0]])
        meas = measure(x, sensing)
        assert meas.y[0] == pytest.approx(2.0, abs=1e-15)

    def test_zero_row_gives_zero(self):
        x = _signal_from_vector([1 + 1j, -2.0, 0.5j])
        sensing = np.zeros((1, 3), dtype=complex)
        assert measure(x, sensing).y[0] == 0.0

    def test_lambda_sq_concentrates(self):
        # mean of m = 2e5 squared moduli sits within 3% of ||x||^2
        rng = np.random.default_rng(102)
        sig = generate(SignalModelSpec(model="gaussian", n=16, k=16, target_norm=1.7), rng)
        meas = measure(sig, sample_sensing(16, 200_000, rng))
        assert 0.97 * sig.norm_sq <= meas.lambda_sq <= 1.03 * sig.norm_sq

    def test_lambda_sq_concentration_rate(self):
        # |lambda^2/||x||^2 - 1| <= 0.1 in at least 95 of 100 seeded ensembles
        hits = 0
        for seed in range(100):
            rng = np.random.default_rng(1000 + seed)
            sig = generate(SignalModelSpec(model="gaussian", n=16, k=4), rng)
            meas = measure(sig, sample_sensing(16, 5000, rng))
            hits += abs(meas.lambda_sq / sig.norm_sq - 1.0) <= 0.1
        assert hits >= 95

    def test_phase_invariance_of_moduli(self):
        rng = np.random.default_rng(103)
        sig = generate(SignalModelSpec(model="gaussian", n=12, k=5), rng)
        sensing = sample_sensing(12, 40, rng)
        rotated = _signal_from_vector(np.exp(0.4j) * sig.vector)
        assert np.allclose(measure(sig, sensing).y, measure(rotated, sensing).y, rtol=1e-13)

    def test_lambda_sq_is_mean_square(self):
        rng = np.random.default_rng(104)
        sig = generate(SignalModelSpec(model="binary", n=10, k=3), rng)
        meas = measure(sig, sample_sensing(10, 25, rng))
        assert meas.lambda_sq == float(np.mean(meas.y**2))

    def test_dimension_mismatch(self):
        x = _signal_from_vector([1.0, 2.0])
        with pytest.raises(ValueError):
            measure(x, np.zeros((3, 5), dtype=complex))

    def test_y_matches_inner_products(self):
        rng = np.random.default_rng(105)
        sig = generate(SignalModelSpec(model="gaussian", n=20, k=6), rng)
        sensing = sample_sensing(20, 30, rng)
        meas = measure(sig, sensing)
        direct = np.abs(sensing.conj() @ sig.vector)
        assert np.allclose(meas.y, direct, rtol=1e-12)


class TestBinaryDump:
    def test_round_trip(self, tmp_path):
        rng = np.random.default_rng(106)
        sig = generate(SignalModelSpec(model="gaussian", n=9, k=4), rng)
        meas = measure(sig, sample_sensing(9, 17, rng))
        path = tmp_path / "meas.bin"
        save_measurements(meas, path)
        loaded = load_measurements(path)
        assert loaded.n == 9 and loaded.m == 17
        assert np.array_equal(loaded.sensing, meas.sensing)
        assert np.array_equal(loaded.y, meas.y)
        assert loaded.lambda_sq == meas.lambda_sq

    def test_layout(self, tmp_path):
        # magic, two u64 dims, then row-major (re, im) f64 pairs, then y
        x = _signal_from_vector([1.0, 1j])
        sensing = np.array([[1.0 + 2.0j, 3.0 - 4.0j]])
        meas = measure(x, sensing)
        path = tmp_path / "meas.bin"
        save_measurements(meas, path)
        blob = path.read_bytes()
        assert blob[:5] == b"SPRM1"
        assert int.from_bytes(blob[5:13], "little") == 2  # n
        assert int.from_bytes(blob[13:21], "little") == 1  # m
        floats = np.frombuffer(blob[21:], dtype="<f8")
        assert floats.tolist() == [1.0, 2.0, 3.0, -4.0, meas.y[0]]

    def test_bad_magic(self, tmp_path):
        path = tmp_path / "junk.bin"
        path.write_bytes(b"NOPE!" + b"\x00" * 32)
        with pytest.raises(ValueError):
            load_measurements(path)

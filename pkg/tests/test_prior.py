import numpy as np
import pytest

from dereverb import (PRIOR_FLOOR, PriorVariance, constant_prior,
                      heuristic_prior, load_prior, resolve_prior_spec,
                      save_prior)
from dereverb.errors import DataError, FormatError, InvalidInputError, ShapeError
from dereverb.stft import Spectrogram


def _spec(bins):
    return Spectrogram(np.asarray(bins, dtype=complex), 256, 1024)


def test_heuristic_constant_magnitude_fixed_point():
    x = _spec(np.exp(1j * np.linspace(0, 20, 64)).reshape(4, 16))
    p = heuristic_prior(x, smoothing=0.4)
    assert np.abs(p.var - 1.0).max() < 1e-12


def test_heuristic_zero_input_hits_floor():
    p = heuristic_prior(_spec(np.zeros((3, 8))), smoothing=0.5)
    assert np.all(p.var == PRIOR_FLOOR)


def test_heuristic_hand_recursion():
    # v(0) = |x(0)|^2, v(n) = 0.5 v(n-1) + 0.5 |x(n)|^2
    x = _spec([[2.0, 0.0]])
    p = heuristic_prior(x, smoothing=0.5)
    assert p.var[0].tolist() == [4.0, 2.0]


def test_heuristic_phase_invariance():
    rng = np.random.default_rng(0)
    mag = rng.uniform(0.1, 2.0, size=(6, 12))
    ph1 = np.exp(1j * rng.uniform(0, 2 * np.pi, size=mag.shape))
    ph2 = np.exp(1j * rng.uniform(0, 2 * np.pi, size=mag.shape))
    p1 = heuristic_prior(_spec(mag * ph1), smoothing=0.3)
    p2 = heuristic_prior(_spec(mag * ph2), smoothing=0.3)
    assert np.abs(p1.var - p2.var).max() < 1e-12


def test_heuristic_smoothing_domain():
    with pytest.raises(InvalidInputError):
        heuristic_prior(_spec(np.ones((2, 2))), smoothing=0.0)
    with pytest.raises(InvalidInputError):
        heuristic_prior(_spec(np.ones((2, 2))), smoothing=1.5)


def test_save_load_round_trip_exact(tmp_path):
    rng = np.random.default_rng(1)
    values = rng.lognormal(size=(7, 13)).astype(np.float32).astype(np.float64)
    p = PriorVariance(values)
    path = tmp_path / "p.sprv"
    save_prior(p, path)
    back = load_prior(path)
    assert np.array_equal(back.var, values)


def test_load_known_values(tmp_path):
    p = PriorVariance([[1.0, 2.0, 3.0], [4.0, 5.0, 6.0]])
    path = tmp_path / "small.sprv"
    save_prior(p, path)
    back = load_prior(path)
    assert back.var.tolist() == [[1.0, 2.0, 3.0], [4.0, 5.0, 6.0]]


def test_file_size_arithmetic(tmp_path):
    p = PriorVariance(np.ones((512, 320)))
    path = tmp_path / "full.sprv"
    save_prior(p, path)
    assert path.stat().st_size == 16 + 512 * 320 * 4


def test_zero_entries_clamped_to_floor(tmp_path):
    p = PriorVariance([[0.0, 1.0]])
    path = tmp_path / "z.sprv"
    save_prior(p, path)
    back = load_prior(path)
    assert back.var[0, 0] == PRIOR_FLOOR
    assert back.var[0, 1] == 1.0


def test_negative_entry_is_data_error(tmp_path):
    p = PriorVariance([[1.0, -2.0], [1.0, 1.0]])
    path = tmp_path / "neg.sprv"
    save_prior(p, path)
    with pytest.raises(DataError, match=r"band 0, frame 1"):
        load_prior(path)


def test_truncated_and_malformed_files(tmp_path):
    path = tmp_path / "t.sprv"
    save_prior(PriorVariance(np.ones((4, 4))), path)
    blob = path.read_bytes()

    (tmp_path / "short.sprv").write_bytes(blob[:-8])
    with pytest.raises(FormatError):
        load_prior(tmp_path / "short.sprv")

    (tmp_path / "magic.sprv").write_bytes(b"XXXX" + blob[4:])
    with pytest.raises(FormatError):
        load_prior(tmp_path / "magic.sprv")

    (tmp_path / "ver.sprv").write_bytes(blob[:4] + b"\x09\x00\x00\x00" + blob[8:])
    with pytest.raises(FormatError):
        load_prior(tmp_path / "ver.sprv")

    with pytest.raises(FormatError):
        load_prior(tmp_path / "missing.sprv")


def test_resolve_prior_spec(tmp_path):
    x = _spec(np.ones((3, 5)))
    assert resolve_prior_spec("heuristic", x).shape == (3, 5)
    assert np.all(resolve_prior_spec("constant:2.5", x).var == 2.5)

    path = tmp_path / "x.sprv"
    save_prior(PriorVariance(np.full((3, 5), 7.0)), path)
    assert np.all(resolve_prior_spec(f"file:{path}", x).var == 7.0)

    save_prior(PriorVariance(np.ones((2, 2))), tmp_path / "bad.sprv")
    with pytest.raises(ShapeError):
        resolve_prior_spec(f"file:{tmp_path / 'bad.sprv'}", x)
    with pytest.raises(InvalidInputError):
        resolve_prior_spec("constant:not-a-number", x)
    with pytest.raises(InvalidInputError):
        resolve_prior_spec("nonsense", x)

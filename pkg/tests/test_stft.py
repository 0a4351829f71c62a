import numpy as np
import pytest

from dereverb import Waveform, analyze, segment, synthesize
from dereverb.errors import InvalidInputError, ShapeError
from dereverb.stft import Spectrogram, _hann

from oracles import direct_dft, direct_istft


def test_zero_waveform_gives_zero_spectrogram():
    w = Waveform(np.zeros(1024 + 3 * 256), 16000)
    s = analyze(w, window_len=1024, hop=256)
    # F = window_len/2 rows always; frame count follows the centred layout
    assert s.bins.shape == (512, 1 + len(w) // 256)
    assert np.all(s.bins == 0)


def test_band_count_is_half_window():
    for wl in (64, 256, 1024):
        w = Waveform(np.random.default_rng(0).normal(size=3 * wl), 16000)
        s = analyze(w, window_len=wl, hop=wl // 4)
        assert s.n_bands == wl // 2


def test_sinusoid_at_bin_center_matches_direct_dft():
    wl, hop, k = 1024, 256, 37
    t = np.arange(4 * wl)
    w = Waveform(np.sin(2 * np.pi * k * t / wl), 16000)
    s = analyze(w, window_len=wl, hop=hop)
    # frame 2 covers original samples [0, 1024): a whole number of periods
    frame = s.bins[:, 2]
    ref = direct_dft(w.samples[:wl] * _hann(wl))[1:wl // 2 + 1]
    assert np.abs(frame - ref).max() < 1e-10 * np.abs(ref).max()
    peak_row = int(np.argmax(np.abs(frame)))
    assert peak_row == k - 1
    # energy lives in the 3-bin Hann main lobe; everything else is numerics
    off = np.abs(frame.copy())
    off[k - 2:k + 1] = 0
    assert off.max() < 1e-10 * np.abs(frame).max()


def make_dc_free_noise(rng, n, window_len=1024, k_lo=2, k_hi=400):
    """Noise-like signal with no DC content in any Hann-windowed frame.

    The transform dismisses the DC row, so signals with per-frame DC energy
    cannot round-trip below that energy. Mixtures of bin-centred sinusoids
    have exactly 3-bin support per frame and lose nothing.
    """
    t = np.arange(n)
    ks = np.arange(k_lo, k_hi)
    amps = rng.normal(size=ks.size)[:, None]
    phis = rng.uniform(0, 2 * np.pi, size=ks.size)[:, None]
    return (amps * np.cos(2 * np.pi * ks[:, None] * t / window_len + phis)).sum(axis=0)


def test_round_trip_interior():
    rng = np.random.default_rng(1)
    w = Waveform(make_dc_free_noise(rng, 8192), 16000)
    back = synthesize(analyze(w, 1024, 256), num_samples=len(w))
    inner = slice(1024, len(w) - 1024)
    err = np.linalg.norm(back.samples[inner] - w.samples[inner])
    assert err < 1e-6 * np.linalg.norm(w.samples[inner])


def test_linearity():
    rng = np.random.default_rng(2)
    w1 = rng.normal(size=2048)
    w2 = rng.normal(size=2048)
    a, b = 0.7, -1.3
    s12 = analyze(Waveform(a * w1 + b * w2, 16000), 512, 128)
    s1 = analyze(Waveform(w1, 16000), 512, 128)
    s2 = analyze(Waveform(w2, 16000), 512, 128)
    assert np.abs(s12.bins - a * s1.bins - b * s2.bins).max() < 1e-10


def test_round_trip_recovers_trailing_partial_hop():
    # lengths that are not hop multiples keep their tail: the overlap-add
    # buffer covers up to half a window beyond (N-1)*hop
    wl, hop = 256, 64
    t = np.arange(12 * wl + 1)
    x = 0.5 * np.cos(2 * np.pi * 19 * t / wl)  # even at both boundaries
    back = synthesize(analyze(Waveform(x, 16000), wl, hop), num_samples=len(x))
    assert np.abs(back.samples - x).max() < 1e-12


def test_zero_spectrogram_synthesizes_to_zero():
    s = Spectrogram(np.zeros((128, 6), dtype=complex), 64, 256)
    assert np.all(synthesize(s).samples == 0)


def test_single_bin_matches_direct_inverse_oracle():
    wl, hop = 256, 64
    bins = np.zeros((wl // 2, 5), dtype=complex)
    bins[10, 2] = 1.0 + 0.0j
    s = Spectrogram(bins, hop, wl)
    got = synthesize(s)
    ref = direct_istft(bins, hop, wl, _hann(wl))
    half = wl // 2
    expected = ref[half:half + 4 * hop]
    assert np.abs(got.samples - expected).max() < 1e-10
    assert np.abs(got.samples).max() > 0  # a genuine short tone burst


def test_synthesize_rejects_wrong_band_count():
    s = Spectrogram(np.zeros((100, 4), dtype=complex), 64, 256)
    with pytest.raises(ShapeError):
        synthesize(s)


def test_analyze_input_validation():
    with pytest.raises(InvalidInputError):
        analyze(Waveform(np.array([]), 16000))
    with pytest.raises(InvalidInputError):
        analyze(Waveform(np.array([1.0, np.nan]), 16000))
    with pytest.raises(InvalidInputError):
        analyze(Waveform(np.ones(100), 16000), window_len=33)
    with pytest.raises(InvalidInputError):
        analyze(Waveform(np.ones(100), 16000), window_len=32, hop=64)


def test_segment_splits_and_pads():
    bins = np.arange(2 * 640).reshape(2, 640).astype(complex)
    s = Spectrogram(bins, 256, 4)
    segs = segment(s, 320)
    assert len(segs) == 2
    assert all(g.spec.n_frames == 320 and g.valid_frames == 320 for g in segs)
    assert np.array_equal(segs[1].spec.bins, bins[:, 320:])

    short = segment(Spectrogram(bins[:, :300], 256, 4), 320)
    assert len(short) == 1
    assert short[0].valid_frames == 300
    assert np.all(short[0].spec.bins[:, 300:] == 0)
    assert np.array_equal(short[0].spec.bins[:, :300], bins[:, :300])

    one = segment(Spectrogram(bins[:, :1], 256, 4), 320)
    assert one[0].valid_frames == 1
    assert np.all(one[0].spec.bins[:, 1:] == 0)

    with pytest.raises(InvalidInputError):
        segment(s, 0)


def test_paper_scale_segment_arithmetic():
    # 5.104 s at 16 kHz analyzes to exactly 320 frames with hop 256
    w = Waveform(np.zeros(81664), 16000)
    s = analyze(w, 1024, 256)
    assert s.n_frames == 320

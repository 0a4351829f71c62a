#!/usr/bin/env python3
"""Regenerate the committed cross-component fixture files.

- fixtures/loss_vectors.json: {inputs, expected} vectors for the two
  divergence losses; external training code must reproduce the expected
  values within 1e-6.
- fixtures/stft_check.wav + fixtures/stft_check_ref.npz: a deterministic
  waveform and this package's spectrogram of it; any re-implementation of
  the analysis transform must match within 1e-5.
"""

from pathlib import Path

import numpy as np

from dereverb import Waveform, analyze, write_wav
from dereverb.metrics import write_loss_fixtures

ROOT = Path(__file__).resolve().parent.parent
FIXTURES = ROOT / "fixtures"


def make_check_waveform(n=24000, rate=16000):
    """A chirp over a noise floor: broadband, deterministic, speech-scale."""
    rng = np.random.default_rng(1234)
    t = np.arange(n) / rate
    sweep = 0.3 * np.sin(2 * np.pi * (200 * t + 1500 * t ** 2))
    tone = 0.1 * np.sin(2 * np.pi * 440 * t)
    noise = 0.02 * rng.standard_normal(n)
    return Waveform((sweep + tone + noise).astype(np.float32), rate)


def main():
    FIXTURES.mkdir(exist_ok=True)
    write_loss_fixtures(FIXTURES / "loss_vectors.json")

    w = make_check_waveform()
    write_wav(FIXTURES / "stft_check.wav", w, fmt="float32")
    spec = analyze(w, window_len=1024, hop=256)
    np.savez_compressed(FIXTURES / "stft_check_ref.npz",
                        bins=spec.bins.astype(np.complex64),
                        window_len=spec.window_len, hop=spec.frame_hop,
                        sample_rate=w.sample_rate)
    print(f"wrote {FIXTURES / 'loss_vectors.json'}")
    print(f"wrote {FIXTURES / 'stft_check.wav'} ({len(w)} samples)")
    print(f"wrote {FIXTURES / 'stft_check_ref.npz'} (shape {spec.bins.shape})")


if __name__ == "__main__":
    main()

#!/usr/bin/env python3
"""End-to-end EM dereverberation on a synthetic instance.

Clean speech-like band signals are reverberated with a known filter and
buried in 30 dB noise; the EM engine gets the reverberant observation and
the clean-speech prior variance, and estimates both the clean spectrogram
and the acoustic parameters. The tracked surrogate objective is printed to
show the monotone climb.
"""

import sys
from pathlib import Path

import numpy as np

sys.path.insert(0, str(Path(__file__).resolve().parent.parent / "tests"))
from synthetic import make_instance, spectral_sisdr  # noqa: E402

from dereverb import EmConfig, PriorVariance, run_em
from dereverb.stft import Spectrogram

clean, prior_var, taps_true, reverberant = make_instance(
    seed=3, n_bands=8, n_frames=640, order=5, decay=0.6, snr_db=30.0)

spec = Spectrogram(reverberant, 256, 1024)
cfg = EmConfig(ctf_order=5, iterations=100)
estimate, state = run_em(spec, PriorVariance(prior_var), cfg)

herr = np.linalg.norm(state.ctf.coeffs - taps_true) / np.linalg.norm(taps_true)
print(f"filter error after {cfg.iterations} rounds: {herr:.3f}")
print(f"SISDR of reverberant input: {spectral_sisdr(clean, reverberant):6.2f} dB")
print(f"SISDR of EM estimate:       {spectral_sisdr(clean, estimate.bins):6.2f} dB")

history = np.asarray(state.history)
print("\nsurrogate objective (every 10th round):")
for i in range(0, len(history), 10):
    print(f"  round {i + 1:3d}: {history[i]:14.1f}")
print("monotone after round 1:",
      bool(np.all(np.diff(history[1:]) >= -1e-6 * np.abs(history[2:]))))

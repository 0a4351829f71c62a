#!/usr/bin/env python3
"""The observation model: per-band convolution with a short filter.

Reverberation in the STFT domain is approximated band by band: each
reverberant band signal is the clean band signal convolved with P+1
complex taps, plus noise. The convolution matrix is lower-triangular
banded Toeplitz and is only ever represented by its taps.
"""

import numpy as np

from dereverb import (CtfFilter, apply_ctf, build_banded_convolution,
                      observation_loglik)
from dereverb.stft import Spectrogram

rng = np.random.default_rng(0)

# the matrix view, for intuition only (production code never builds it)
taps = np.array([1.0, 0.5 - 0.2j, 0.25j])
op = build_banded_convolution(taps, n=6)
with np.printoptions(precision=2, suppress=True):
    print("dense view of the banded convolution operator:")
    print(op.to_dense())

# apply a random 4-band filter to a random clean spectrogram
F, N, P = 4, 200, 8
clean = rng.normal(size=(F, N)) + 1j * rng.normal(size=(F, N))
coeffs = 0.6 ** np.arange(P + 1) * np.exp(1j * rng.uniform(0, 2 * np.pi, (F, P + 1)))
coeffs[:, 0] = 1.0
spec = Spectrogram(clean, 256, 1024)
reverberant = apply_ctf(CtfFilter(coeffs), spec)
print(f"\nclean power {np.mean(np.abs(clean) ** 2):.2f} -> reverberant "
      f"power {np.mean(np.abs(reverberant.bins) ** 2):.2f}")

# the per-band Gaussian log-likelihood peaks at the true clean signal
sigma2 = 0.1
noisy = reverberant.bins[0] + np.sqrt(sigma2 / 2) * (
    rng.normal(size=N) + 1j * rng.normal(size=N))
ll_true = observation_loglik(noisy, clean[0], coeffs[0], sigma2)
ll_zero = observation_loglik(noisy, np.zeros(N, complex), coeffs[0], sigma2)
print(f"log-likelihood at true clean signal: {ll_true:.1f}")
print(f"log-likelihood at zero signal:       {ll_zero:.1f}")

"""Per-band convolutive transfer function (CTF) observation model.

Each frequency band f of the reverberant spectrogram is modelled as the
causal convolution of the clean band signal with a short complex filter
h_f of length P+1, plus stationary complex Gaussian noise:

    x_f[n] = sum_p s_f[n - p] * h_f[p] + w_f[n],   s_f[k < 0] = 0.

In matrix form x_f = T(h_f) s_f + w_f with T(h_f) the N x N lower-triangular
banded Toeplitz matrix of the filter. T is never materialized in production
code; it exists implicitly as (coeffs, N).
"""

from dataclasses import dataclass

import numpy as np

from .errors import InvalidInputError, ShapeError
from .stft import Spectrogram


@dataclass
class CtfFilter:
    """Per-band filter taps, ``coeffs[f, p] = h_f[p]``, shape [F, P+1]."""

    coeffs: np.ndarray

    def __post_init__(self):
        self.coeffs = np.atleast_2d(np.asarray(self.coeffs, dtype=np.complex128))

    @property
    def order(self) -> int:
        """P: number of past frames the filter reaches back."""
        return self.coeffs.shape[1] - 1


@dataclass
class NoiseVariance:
    """Per-band noise power, ``power[f]``, shape [F], strictly positive."""

    power: np.ndarray

    def __post_init__(self):
        self.power = np.atleast_1d(np.asarray(self.power, dtype=np.float64))


class BandedLowerToeplitz:
    """Implicit T(h): the banded lower-triangular convolution matrix."""

    def __init__(self, coeffs: np.ndarray, n: int):
        if n < 1:
            raise InvalidInputError(f"matrix size must be >= 1, got {n}")
        self.coeffs = np.asarray(coeffs, dtype=np.complex128).ravel()
        self.n = n

    def matvec(self, v: np.ndarray) -> np.ndarray:
        v = np.asarray(v)
        if v.shape[-1] != self.n:
            raise ShapeError(f"vector length {v.shape[-1]} != matrix size {self.n}")
        return convolve_causal(self.coeffs[None, :], v[None, :])[0]

    def to_dense(self) -> np.ndarray:
        """Explicit N x N matrix. Test/diagnostic use only."""
        dense = np.zeros((self.n, self.n), dtype=np.complex128)
        for p, c in enumerate(self.coeffs):
            if p < self.n:
                dense += c * np.eye(self.n, k=-p)
        return dense


def build_banded_convolution(h_f: np.ndarray, n: int) -> BandedLowerToeplitz:
    return BandedLowerToeplitz(h_f, n)


def convolve_causal(coeffs: np.ndarray, x: np.ndarray) -> np.ndarray:
    """Band-wise causal convolution, ``out[f, n] = sum_p x[f, n-p] coeffs[f, p]``.

    coeffs: [F, P+1], x: [F, N]; indices n-p < 0 read as zeros.
    """
    coeffs = np.asarray(coeffs, dtype=np.complex128)
    x = np.asarray(x, dtype=np.complex128)
    F, N = x.shape
    out = coeffs[:, :1] * x
    for p in range(1, min(coeffs.shape[1], N)):
        out[:, p:] += coeffs[:, p:p + 1] * x[:, :N - p]
    return out


def apply_ctf(h: CtfFilter, s: Spectrogram) -> Spectrogram:
    """Run the observation model forward: per-band convolution of s with h."""
    if h.coeffs.shape[0] != s.n_bands:
        raise ShapeError(
            f"filter has {h.coeffs.shape[0]} bands, spectrogram has {s.n_bands}"
        )
    if s.n_frames < 1:
        raise ShapeError("spectrogram must have at least one frame")
    bins = convolve_causal(h.coeffs, s.bins)
    return Spectrogram(bins, s.frame_hop, s.window_len, s.sample_rate)


def observation_loglik(x_f, s_f, h_f, sigma2: float) -> float:
    """Log-density of one band under the circularly-symmetric Gaussian model.

    ln CN(x_f; T(h_f) s_f, sigma2 I) = -N ln(pi sigma2) - ||x_f - T(h_f) s_f||^2 / sigma2
    """
    if sigma2 <= 0:
        raise InvalidInputError(f"sigma2 must be positive, got {sigma2}")
    x_f = np.asarray(x_f, dtype=np.complex128).ravel()
    s_f = np.asarray(s_f, dtype=np.complex128).ravel()
    if x_f.shape != s_f.shape:
        raise ShapeError(f"length mismatch: x {x_f.shape} vs s {s_f.shape}")
    n = x_f.shape[0]
    resid = x_f - convolve_causal(np.asarray(h_f, dtype=np.complex128)[None, :],
                                  s_f[None, :])[0]
    return float(-n * np.log(np.pi * sigma2)
                 - np.vdot(resid, resid).real / sigma2)

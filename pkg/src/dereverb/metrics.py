"""Local evaluation metrics: SISDR, Itakura-Saito divergence, and the KL
divergence of a diagonal Gaussian from the standard Gaussian.

The two divergences are the golden reference for external training code;
:func:`write_loss_fixtures` emits a JSON file of shared test vectors.
"""

import json
from dataclasses import dataclass

import numpy as np

from .audio import Waveform
from .errors import InvalidInputError, ShapeError

SISDR_CAP_DB = 100.0


@dataclass
class MetricReport:
    sisdr_db: float
    is_divergence: float
    notes: str = ""


def _as_samples(x) -> np.ndarray:
    if isinstance(x, Waveform):
        x = x.samples
    x = np.asarray(x, dtype=np.float64).ravel()
    return x


def sisdr(reference, estimate) -> float:
    """Scale-invariant signal-to-distortion ratio, in dB.

    Projects the estimate onto the reference: alpha = <est, ref> / ||ref||^2,
    then returns 10 log10(||alpha ref||^2 / ||alpha ref - est||^2). A zero
    error term returns the +inf sentinel of ``SISDR_CAP_DB``; an estimate
    orthogonal to the reference returns ``-SISDR_CAP_DB``.
    """
    ref = _as_samples(reference)
    est = _as_samples(estimate)
    if ref.size == 0:
        raise InvalidInputError("signals must have length >= 1")
    if ref.shape != est.shape:
        raise ShapeError(f"length mismatch: {ref.shape} vs {est.shape}")
    ref_pow = ref.dot(ref)
    if ref_pow == 0:
        raise InvalidInputError("reference signal is all-zero")
    alpha = est.dot(ref) / ref_pow
    target = alpha * ref
    err = target - est
    target_pow = target.dot(target)
    err_pow = err.dot(err)
    if err_pow == 0:
        return SISDR_CAP_DB
    if target_pow == 0:
        return -SISDR_CAP_DB
    return float(10.0 * np.log10(target_pow / err_pow))


def is_divergence(power_a, power_b) -> float:
    """Itakura-Saito divergence, sum over entries of a/b - ln(a/b) - 1."""
    a = np.asarray(power_a, dtype=np.float64)
    b = np.asarray(power_b, dtype=np.float64)
    if a.shape != b.shape:
        raise ShapeError(f"shape mismatch: {a.shape} vs {b.shape}")
    if np.any(a <= 0) or np.any(b <= 0):
        raise InvalidInputError("Itakura-Saito divergence needs positive entries")
    ratio = a / b
    return float(np.sum(ratio - np.log(ratio) - 1.0))


def kl_diag_gauss(mean_q, var_q) -> float:
    """KL(N(mean, diag(var)) || N(0, I)), summed over entries."""
    mean = np.asarray(mean_q, dtype=np.float64)
    var = np.asarray(var_q, dtype=np.float64)
    if mean.shape != var.shape:
        raise ShapeError(f"shape mismatch: {mean.shape} vs {var.shape}")
    if np.any(var <= 0):
        raise InvalidInputError("variances must be positive")
    return float(0.5 * np.sum(var + mean ** 2 - 1.0 - np.log(var)))


def write_loss_fixtures(path, seed: int = 20240517) -> None:
    """Write shared {inputs, expected} test vectors for the two divergences.

    External training code validates its loss implementation against these
    values (tolerance 1e-6).
    """
    rng = np.random.default_rng(seed)
    fixtures = {"is_divergence": [], "kl_diag_gauss": [], "combined": []}
    for shape in [(1, 1), (3, 4), (8, 5)]:
        a = rng.lognormal(sigma=1.5, size=shape)
        b = rng.lognormal(sigma=1.5, size=shape)
        fixtures["is_divergence"].append({
            "power_a": a.tolist(), "power_b": b.tolist(),
            "expected": is_divergence(a, b),
        })
        mean = rng.normal(size=shape)
        var = rng.lognormal(sigma=0.7, size=shape)
        fixtures["kl_diag_gauss"].append({
            "mean": mean.tolist(), "var": var.tolist(),
            "expected": kl_diag_gauss(mean, var),
        })
    for (fdim, ndim, ddim) in [(6, 4, 2), (16, 10, 3)]:
        s_pow = rng.lognormal(sigma=1.0, size=(fdim, ndim))
        dec_var = rng.lognormal(sigma=1.0, size=(fdim, ndim))
        enc_mean = rng.normal(size=(ddim, ndim))
        enc_var = rng.lognormal(sigma=0.5, size=(ddim, ndim))
        fixtures["combined"].append({
            "s_power": s_pow.tolist(), "decoder_var": dec_var.tolist(),
            "enc_mean": enc_mean.tolist(), "enc_var": enc_var.tolist(),
            "expected": is_divergence(s_pow, dec_var) + kl_diag_gauss(enc_mean, enc_var),
        })
    with open(path, "w") as fh:
        json.dump(fixtures, fh, indent=1)

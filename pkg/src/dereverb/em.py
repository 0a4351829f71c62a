"""EM engine: alternate posterior inference of the clean spectrogram with
closed-form re-estimation of the CTF filter and the per-band noise power.

One round is

    e_step       posterior N(mu_f, Sigma_f) of the clean band signal,
                 banded precision solved by Cholesky + Takahashi recursion
    m_step_ctf   least-squares filter update from the posterior moments
    m_step_noise residual power plus the posterior-covariance trace term,
                 evaluated with the freshly updated filter

The prior variance is fixed for the whole run. The clean-spectrogram
estimate is the posterior mean of the final round.
"""

import warnings
from dataclasses import dataclass, field

import numpy as np

from . import banded
from .ctf import CtfFilter, NoiseVariance, convolve_causal
from .errors import InvalidInputError, NumericalError, ShapeError
from .prior import PriorVariance
from .stft import Spectrogram

_FLOOR_RAISE = 1e3  # multiplier for the one retry after a factorization failure


@dataclass
class EmConfig:
    """Engine settings. Defaults follow the reference operating point."""

    ctf_order: int = 30           # P: the filter has P+1 taps
    iterations: int = 100
    noise_init_scale: float = 1e3
    h0_init: complex = 1.0 + 0.0j
    noise_floor: float = 1e-8     # relative to mean observed power
    prior_floor: float = 1e-10
    likelihood_tracking: bool = True
    workers: int = 1


@dataclass
class PosteriorStats:
    """Per-band Gaussian posterior of the clean band signals.

    mean[f, n] is the posterior mean; cov_band[f, d, n] holds the posterior
    covariance entry Sigma_f(n, n-d) for d = 0..P (zero where n < d).
    """

    mean: np.ndarray
    cov_band: np.ndarray


@dataclass
class EmState:
    ctf: CtfFilter
    noise: NoiseVariance
    prior: PriorVariance
    observed: Spectrogram
    cfg: EmConfig
    noise_floor_abs: float
    history: list = field(default_factory=list)


def init_state(x: Spectrogram, prior: PriorVariance, cfg: EmConfig) -> EmState:
    """Identity filter, noise at ``noise_init_scale`` times the band power.

    All-zero bands fall back to the absolute noise floor
    (``cfg.noise_floor`` times the mean observed power).
    """
    if prior.var.shape != x.bins.shape:
        raise ShapeError(
            f"prior shape {prior.var.shape} != spectrogram shape {x.bins.shape}"
        )
    power = np.abs(x.bins) ** 2
    mean_power = float(power.mean())
    floor = cfg.noise_floor * (mean_power if mean_power > 0 else 1.0)

    noise = np.maximum(floor, cfg.noise_init_scale * power.mean(axis=1))
    coeffs = np.zeros((x.n_bands, cfg.ctf_order + 1), dtype=np.complex128)
    coeffs[:, 0] = cfg.h0_init
    lam = PriorVariance(np.maximum(prior.var, cfg.prior_floor))
    return EmState(CtfFilter(coeffs), NoiseVariance(noise), lam, x,
                   cfg, noise_floor_abs=floor)


def e_step(state: EmState) -> PosteriorStats:
    """Posterior mean and central covariance band of every band."""
    mu, covb = banded.estep_posterior(
        state.observed.bins, state.ctf.coeffs, state.noise.power,
        state.prior.var, workers=state.cfg.workers,
    )
    return PosteriorStats(mu, covb)


def _moments(x_bins, mu, covb):
    """Accumulated M-step moments over frames (zeros before the segment).

    num[f, p]  = sum_n x[n] conj(mu[n-p])
    corr[f, p, q] = sum_n [ mu[n-p] conj(mu[n-q]) + Sigma(n-p, n-q) ]
    with corr split into its mean (A) and covariance (G) parts.
    """
    F, N = x_bins.shape
    P1 = covb.shape[1]
    num = np.empty((F, P1), dtype=np.complex128)
    A = np.empty((F, P1, P1), dtype=np.complex128)
    G = np.empty((F, P1, P1), dtype=np.complex128)
    mu_c = np.conj(mu)
    for p in range(P1):
        num[:, p] = np.einsum("fi,fi->f", x_bins[:, p:], mu_c[:, :N - p])
    for d in range(P1):
        cum_mu = np.cumsum(mu[:, d:] * mu_c[:, :N - d], axis=1)
        cum_cov = np.cumsum(covb[:, d, :], axis=1)
        for p in range(P1 - d):
            A[:, p, p + d] = cum_mu[:, N - 1 - d - p]
            G[:, p, p + d] = cum_cov[:, N - 1 - p]
            if d:
                A[:, p + d, p] = np.conj(A[:, p, p + d])
                G[:, p + d, p] = np.conj(G[:, p, p + d])
    return num, A, G


def _solve_ctf(num, den):
    """h = num^T den^{-1} per band, with a ridge fallback for singular bands."""
    rhs = np.conj(num)[..., None]
    try:
        sol = np.linalg.solve(den, rhs)[..., 0]
        if np.all(np.isfinite(sol)):
            return np.conj(sol)
    except np.linalg.LinAlgError:
        pass
    P1 = den.shape[-1]
    out = np.empty(num.shape, dtype=np.complex128)
    for f in range(den.shape[0]):
        try:
            sol = np.linalg.solve(den[f], np.conj(num[f]))
            if not np.all(np.isfinite(sol)):
                raise np.linalg.LinAlgError
        except np.linalg.LinAlgError:
            ridge = 1e-10 * np.trace(den[f]).real / P1
            warnings.warn(
                f"band {f}: singular filter normal matrix, adding ridge {ridge:.3e}"
            )
            sol = np.linalg.solve(den[f] + ridge * np.eye(P1), np.conj(num[f]))
        out[f] = np.conj(sol)
    return out


def m_step_ctf(state: EmState, post: PosteriorStats) -> CtfFilter:
    """Filter update: per band, the least-squares solution of the expected
    quadratic fit of the observation by the filtered posterior."""
    num, A, G = _moments(state.observed.bins, post.mean, post.cov_band)
    return CtfFilter(_solve_ctf(num, A + G))


def m_step_noise(state: EmState, post: PosteriorStats,
                 ctf_new: CtfFilter) -> NoiseVariance:
    """Noise update: (residual power + filtered-covariance trace) / N,
    clamped at the noise floor. Uses only the stored covariance band."""
    x = state.observed.bins
    n_frames = x.shape[1]
    resid = x - convolve_causal(ctf_new.coeffs, post.mean)
    res_pow = np.einsum("fn,fn->f", resid, np.conj(resid)).real
    _, _, G = _moments(x, post.mean, post.cov_band)
    tr = np.einsum("fp,fpq,fq->f", ctf_new.coeffs, G,
                   np.conj(ctf_new.coeffs)).real
    return NoiseVariance(np.maximum(state.noise_floor_abs,
                                    (res_pow + tr) / n_frames))


def surrogate_objective(x_bins, h_coeffs, noise_power, post: PosteriorStats) -> float:
    """Noise- and filter-dependent part of the expected complete-data
    log-likelihood under the given posterior:

        sum_f [ -N ln(pi sigma2_f) - (||x_f - T(h_f) mu_f||^2
                                      + tr(T Sigma_f T^H)) / sigma2_f ]

    The M-step cannot decrease this value at fixed posterior.
    """
    x_bins = np.asarray(x_bins)
    n_frames = x_bins.shape[1]
    resid = x_bins - convolve_causal(h_coeffs, post.mean)
    res_pow = np.einsum("fn,fn->f", resid, np.conj(resid)).real
    _, _, G = _moments(x_bins, post.mean, post.cov_band)
    tr = np.einsum("fp,fpq,fq->f", h_coeffs, G, np.conj(h_coeffs)).real
    return float(np.sum(-n_frames * np.log(np.pi * noise_power)
                        - (res_pow + tr) / noise_power))


def _m_step_fused(state: EmState, post: PosteriorStats):
    """One M-step round sharing the moment accumulation across the filter
    update, the noise update, and the tracked objective. Identical
    arithmetic to the public operations, evaluated once."""
    x = state.observed.bins
    n_frames = x.shape[1]
    num, A, G = _moments(x, post.mean, post.cov_band)
    ctf_new = CtfFilter(_solve_ctf(num, A + G))
    resid = x - convolve_causal(ctf_new.coeffs, post.mean)
    res_pow = np.einsum("fn,fn->f", resid, np.conj(resid)).real
    tr = np.einsum("fp,fpq,fq->f", ctf_new.coeffs, G,
                   np.conj(ctf_new.coeffs)).real
    noise_new = NoiseVariance(np.maximum(state.noise_floor_abs,
                                         (res_pow + tr) / n_frames))
    objective = float(np.sum(-n_frames * np.log(np.pi * noise_new.power)
                             - (res_pow + tr) / noise_new.power))
    return ctf_new, noise_new, objective


def _raise_floors(state: EmState, bands) -> None:
    state.noise.power[bands] = np.maximum(
        state.noise.power[bands] * _FLOOR_RAISE,
        state.noise_floor_abs * _FLOOR_RAISE,
    )
    state.prior.var[bands] = np.maximum(
        state.prior.var[bands], state.cfg.prior_floor * _FLOOR_RAISE
    )


def run_em(x: Spectrogram, prior: PriorVariance, cfg: EmConfig):
    """Run ``cfg.iterations`` EM rounds; returns (clean estimate, final state).

    The estimate is the posterior mean of the last round. A factorization
    failure triggers one floor raise for the failing bands before the error
    propagates. ``state.history`` tracks the surrogate objective when
    ``cfg.likelihood_tracking`` is set.
    """
    if cfg.ctf_order >= x.n_frames:
        raise InvalidInputError(
            f"CTF order {cfg.ctf_order} must be smaller than the frame count "
            f"{x.n_frames}"
        )
    if cfg.iterations < 1:
        raise InvalidInputError(f"iterations must be >= 1, got {cfg.iterations}")
    state = init_state(x, prior, cfg)
    retried = False
    mean = None
    for _ in range(cfg.iterations):
        try:
            post = e_step(state)
        except NumericalError as err:
            if retried:
                raise
            retried = True
            _raise_floors(state, getattr(err, "bands", [err.band]))
            post = e_step(state)
        ctf_new, noise_new, objective = _m_step_fused(state, post)
        state.ctf = ctf_new
        state.noise = noise_new
        if cfg.likelihood_tracking:
            state.history.append(objective)
        mean = post.mean
    estimate = Spectrogram(mean, x.frame_hop, x.window_len, x.sample_rate)
    return estimate, state

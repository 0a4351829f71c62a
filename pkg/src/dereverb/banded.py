"""Banded Hermitian kernels behind the E-step.

Per band f the posterior precision

    J = T(h)^H T(h) / sigma2 + diag(1 / lam)

is Hermitian positive definite with bandwidth P (P+1 filter taps). For each
band the kernel

1. builds the lower band of J,
2. factorizes J = L L^H in band storage,
3. solves J mu = T(h)^H x / sigma2 for the posterior mean,
4. runs the Takahashi recursion on L to obtain the central P+1 diagonals of
   J^{-1} without ever forming the dense inverse.

Cost is O(N * P^2) per band; bands are independent and processed in
parallel. Band storage convention: ``ab[d, i] = A[i + d, i]`` for d = 0..P.
The returned covariance uses the row-indexed layout
``cov_band[d, n] = inv(J)[n, n - d]`` (zero where n < d).
"""

import math
import os

import numba as nb
import numpy as np

from .errors import NumericalError

# portable default; overridable through the usual numba env var
if "NUMBA_THREADING_LAYER" not in os.environ:
    nb.config.THREADING_LAYER = "workqueue"

_MAX_THREADS = nb.config.NUMBA_NUM_THREADS


@nb.njit(cache=True, parallel=True)
def _estep_kernel(X, H, sigma2, lam, mu, covb, status):  # pragma: no cover
    F, N = X.shape
    P = H.shape[1] - 1
    for f in nb.prange(F):
        h = H[f]
        inv_s2 = 1.0 / sigma2[f]

        # lower band of J; the filter autocorrelation is shared by all
        # columns except the trailing P, where the frame range truncates
        acorr = np.empty(P + 1, dtype=np.complex128)
        for d in range(P + 1):
            acc = 0.0 + 0.0j
            for q in range(P + 1 - d):
                acc += np.conj(h[q]) * h[q + d]
            acorr[d] = acc * inv_s2
        Cb = np.zeros((P + 1, N), dtype=np.complex128)
        for i in range(N):
            dmax = min(P, N - 1 - i)
            if i <= N - 1 - P:
                for d in range(dmax + 1):
                    Cb[d, i] = acorr[d]
            else:
                for d in range(dmax + 1):
                    acc = 0.0 + 0.0j
                    for q in range(N - i - d):
                        acc += np.conj(h[q]) * h[q + d]
                    Cb[d, i] = acc * inv_s2
            Cb[0, i] += 1.0 / lam[f, i]

        # banded Cholesky, in place: J = L L^H
        ok = True
        for j in range(N):
            pivot = Cb[0, j].real
            if not (math.isfinite(pivot) and pivot > 0.0):
                status[f] = j + 1
                ok = False
                break
            ljj = math.sqrt(pivot)
            Cb[0, j] = ljj + 0.0j
            m = min(P, N - 1 - j)
            for d in range(1, m + 1):
                Cb[d, j] /= ljj
            for k in range(1, m + 1):
                ck = np.conj(Cb[k, j])
                for d2 in range(k, m + 1):
                    Cb[d2 - k, j + k] -= Cb[d2, j] * ck
        if not ok:
            continue

        # rhs T^H x / sigma2, then L y = b and L^H mu = y
        y = np.empty(N, dtype=np.complex128)
        for i in range(N):
            pmax = min(P, N - 1 - i)
            acc = 0.0 + 0.0j
            for p in range(pmax + 1):
                acc += np.conj(h[p]) * X[f, i + p]
            y[i] = acc * inv_s2
        for i in range(N):
            acc = y[i]
            dmax = min(P, i)
            for d in range(1, dmax + 1):
                acc -= Cb[d, i - d] * y[i - d]
            y[i] = acc / Cb[0, i].real
        for i in range(N - 1, -1, -1):
            acc = y[i]
            dmax = min(P, N - 1 - i)
            for d in range(1, dmax + 1):
                acc -= np.conj(Cb[d, i]) * mu[f, i + d]
            mu[f, i] = acc / Cb[0, i].real

        # Takahashi: band of J^{-1}, column i from columns > i
        lu = np.empty(P + 1, dtype=np.complex128)
        for i in range(N - 1, -1, -1):
            lii = Cb[0, i].real
            inv_d = 1.0 / (lii * lii)
            m = min(P, N - 1 - i)
            for t in range(1, m + 1):
                lu[t] = np.conj(Cb[t, i] / lii)
            for c in range(m, -1, -1):
                acc = inv_d + 0.0j if c == 0 else 0.0 + 0.0j
                for t in range(1, m + 1):
                    if t >= c:
                        zz = covb[f, t - c, i + t]
                    else:
                        zz = np.conj(covb[f, c - t, i + c])
                    acc -= lu[t] * zz
                if c == 0:
                    covb[f, 0, i] = acc.real + 0.0j
                else:
                    covb[f, c, i + c] = np.conj(acc)


def estep_posterior(X, H, sigma2, lam, workers: int = 1):
    """Posterior mean and covariance band for all bands at once.

    X: [F, N] complex observation; H: [F, P+1] filter taps;
    sigma2: [F] noise power; lam: [F, N] prior variance.
    Returns (mu [F, N], cov_band [F, P+1, N]).

    Raises NumericalError naming the first failing band if any band's
    precision matrix is not numerically positive definite.
    """
    X = np.ascontiguousarray(X, dtype=np.complex128)
    H = np.ascontiguousarray(H, dtype=np.complex128)
    sigma2 = np.ascontiguousarray(sigma2, dtype=np.float64)
    lam = np.ascontiguousarray(lam, dtype=np.float64)
    F, N = X.shape
    P1 = H.shape[1]
    mu = np.zeros((F, N), dtype=np.complex128)
    covb = np.zeros((F, P1, N), dtype=np.complex128)
    status = np.zeros(F, dtype=np.int64)

    nb.set_num_threads(min(max(1, workers), _MAX_THREADS))
    _estep_kernel(X, H, sigma2, lam, mu, covb, status)

    bad = np.nonzero(status)[0]
    if bad.size:
        f = int(bad[0])
        err = NumericalError(
            f"posterior precision not positive definite in band {f} "
            f"(pivot {int(status[f]) - 1}); {bad.size} band(s) affected",
            band=f,
        )
        err.bands = [int(b) for b in bad]
        raise err
    return mu, covb


def warmup() -> None:
    """Trigger JIT compilation on a tiny problem (no-op afterwards)."""
    X = np.ones((1, 4), dtype=np.complex128)
    H = np.array([[1.0 + 0j, 0.1]], dtype=np.complex128)
    estep_posterior(X, H, np.array([1.0]), np.ones((1, 4)), workers=1)

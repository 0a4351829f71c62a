"""Clean-speech prior variance providers.

The EM engine needs one positive number per time-frequency bin: the prior
variance of the clean spectrogram. Providers:

- :func:`heuristic_prior` — recursive average of the observed power,
- :func:`constant_prior` — a flat value,
- :func:`load_prior` — a file written by an external trainer.

Prior file format (shared wire contract, little-endian):
magic ``b"SPRV"``, u32 version (=1), u32 F, u32 N, then F*N float32
values in band-major order (f outer, n inner).
"""

import struct
from dataclasses import dataclass

import numpy as np

from .errors import DataError, FormatError, InvalidInputError
from .stft import Spectrogram

PRIOR_FLOOR = 1e-10

_MAGIC = b"SPRV"
_VERSION = 1
_HEADER = struct.Struct("<4sIII")


@dataclass
class PriorVariance:
    """Per-bin prior variance, ``var[f, n] >= PRIOR_FLOOR``, shape [F, N]."""

    var: np.ndarray

    def __post_init__(self):
        self.var = np.asarray(self.var, dtype=np.float64)

    @property
    def shape(self):
        return self.var.shape


def heuristic_prior(x: Spectrogram, smoothing: float = 0.3,
                    floor: float = PRIOR_FLOOR) -> PriorVariance:
    """Prior variance from a first-order recursive average of observed power.

    v[f, 0] = |x[f, 0]|^2 and
    v[f, n] = (1 - smoothing) * v[f, n-1] + smoothing * |x[f, n]|^2,
    floored at ``floor``. Depends on the magnitude of x only.
    """
    if not 0 < smoothing <= 1:
        raise InvalidInputError(f"smoothing must be in (0, 1], got {smoothing}")
    power = np.abs(x.bins) ** 2
    var = np.empty_like(power)
    var[:, 0] = power[:, 0]
    for n in range(1, power.shape[1]):
        var[:, n] = (1 - smoothing) * var[:, n - 1] + smoothing * power[:, n]
    return PriorVariance(np.maximum(var, floor))


def constant_prior(value: float, shape, floor: float = PRIOR_FLOOR) -> PriorVariance:
    if not np.isfinite(value) or value <= 0:
        raise InvalidInputError(f"constant prior value must be positive, got {value}")
    return PriorVariance(np.full(shape, max(value, floor)))


def save_prior(p: PriorVariance, path) -> None:
    """Write ``p`` in the prior file format (values stored as float32)."""
    f_bands, n_frames = p.var.shape
    payload = p.var.astype("<f4").tobytes(order="C")
    try:
        with open(path, "wb") as fh:
            fh.write(_HEADER.pack(_MAGIC, _VERSION, f_bands, n_frames))
            fh.write(payload)
    except OSError as exc:
        raise OSError(f"cannot write prior file {path}: {exc}") from exc


def load_prior(path, floor: float = PRIOR_FLOOR) -> PriorVariance:
    """Read a prior file; values below ``floor`` (including zero) are clamped.

    Raises FormatError for missing/truncated/unrecognized files and DataError
    (naming the first offending bin) for negative or non-finite entries.
    """
    try:
        with open(path, "rb") as fh:
            blob = fh.read()
    except OSError as exc:
        raise FormatError(f"cannot read prior file {path}: {exc}") from None
    if len(blob) < _HEADER.size:
        raise FormatError(f"{path}: truncated prior file (no header)")
    magic, version, f_bands, n_frames = _HEADER.unpack_from(blob)
    if magic != _MAGIC:
        raise FormatError(f"{path}: bad magic {magic!r}, expected {_MAGIC!r}")
    if version != _VERSION:
        raise FormatError(f"{path}: unsupported prior file version {version}")
    expected = _HEADER.size + 4 * f_bands * n_frames
    if len(blob) != expected:
        raise FormatError(
            f"{path}: wrong payload size, expected {expected} bytes, got {len(blob)}"
        )
    values = np.frombuffer(blob, dtype="<f4", offset=_HEADER.size)
    var = values.astype(np.float64).reshape(f_bands, n_frames)
    bad = ~np.isfinite(var) | (var < 0)
    if np.any(bad):
        f_bad, n_bad = np.argwhere(bad)[0]
        raise DataError(
            f"{path}: invalid prior value {var[f_bad, n_bad]!r} at band {f_bad}, frame {n_bad}"
        )
    return PriorVariance(np.maximum(var, floor))


def resolve_prior_spec(spec: str, x: Spectrogram) -> PriorVariance:
    """Build the prior selected by a CLI-style spec string.

    Accepted forms: ``heuristic``, ``file:<path>``, ``constant:<value>``.
    A file prior must match the spectrogram shape.
    """
    from .errors import ShapeError

    if spec == "heuristic":
        return heuristic_prior(x)
    if spec.startswith("file:"):
        prior = load_prior(spec[len("file:"):])
        if prior.shape != x.bins.shape:
            raise ShapeError(
                f"prior file shape {prior.shape} != spectrogram shape {x.bins.shape}"
            )
        return prior
    if spec.startswith("constant:"):
        try:
            value = float(spec[len("constant:"):])
        except ValueError:
            raise InvalidInputError(f"bad constant prior spec {spec!r}") from None
        return constant_prior(value, x.bins.shape)
    raise InvalidInputError(
        f"unknown prior spec {spec!r}; use heuristic, file:<path> or constant:<value>"
    )

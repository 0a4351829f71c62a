"""Waveform container and mono WAV ingestion/emission.

PCM16 and IEEE-float32 files are accepted; samples are promoted to float64
internally. PCM16 is scaled to [-1, 1) on read and symmetrically on write.
"""

from dataclasses import dataclass

import numpy as np
from scipy.io import wavfile

from .errors import DataError, FormatError, InvalidInputError

_PCM16_SCALE = 32768.0


@dataclass
class Waveform:
    """A mono time-domain signal. ``samples`` is 1-D float64, ``sample_rate`` in Hz."""

    samples: np.ndarray
    sample_rate: int

    def __post_init__(self):
        self.samples = np.asarray(self.samples, dtype=np.float64)
        if self.sample_rate <= 0:
            raise InvalidInputError(f"sample_rate must be positive, got {self.sample_rate}")

    def __len__(self):
        return self.samples.shape[0]


def read_wav(path) -> Waveform:
    """Read a mono PCM16 or float32 WAV file.

    Raises FormatError for unreadable/unsupported files and for multichannel
    input (the message names the channel count), DataError for non-finite
    samples.
    """
    try:
        rate, data = wavfile.read(path)
    except FileNotFoundError:
        raise FormatError(f"WAV file not found: {path}") from None
    except ValueError as exc:
        raise FormatError(f"cannot parse WAV file {path}: {exc}") from None
    if data.ndim != 1:
        raise FormatError(
            f"{path}: expected mono audio, got {data.shape[1]} channels"
        )
    if data.dtype == np.int16:
        samples = data.astype(np.float64) / _PCM16_SCALE
    elif data.dtype in (np.float32, np.float64):
        samples = data.astype(np.float64)
    else:
        raise FormatError(
            f"{path}: unsupported sample format {data.dtype}, expected int16 or float32"
        )
    if samples.size and not np.all(np.isfinite(samples)):
        raise DataError(f"{path}: non-finite samples in WAV data")
    return Waveform(samples, int(rate))


def write_wav(path, w: Waveform, fmt: str = "float32") -> None:
    """Write ``w`` as PCM16 (``fmt='pcm16'``) or IEEE float32 (default)."""
    if fmt == "float32":
        data = w.samples.astype(np.float32)
    elif fmt == "pcm16":
        clipped = np.clip(w.samples, -1.0, 32767.0 / _PCM16_SCALE)
        data = np.round(clipped * _PCM16_SCALE).astype(np.int16)
    else:
        raise InvalidInputError(f"unknown WAV format {fmt!r}")
    try:
        wavfile.write(path, w.sample_rate, data)
    except OSError as exc:
        raise OSError(f"cannot write WAV file {path}: {exc}") from exc

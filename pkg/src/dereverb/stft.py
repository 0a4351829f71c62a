"""STFT analysis/synthesis and frame segmentation.

Conventions (fixed across the package):

- Hann window (periodic), reflect padding of ``window_len // 2`` samples on
  both ends, so frame ``n`` is centred at sample ``n * hop`` and the frame
  count is ``1 + len(w) // hop``.
- One-sided spectrum with the DC row removed and the Nyquist row kept, so a
  spectrogram has exactly ``window_len // 2`` rows.
- Synthesis is overlap-add with window-sum-squared normalization.
"""

from dataclasses import dataclass, field

import numpy as np
from scipy.signal import get_window

from .audio import Waveform
from .errors import InvalidInputError, ShapeError


@dataclass
class Spectrogram:
    """Complex F x N time-frequency matrix plus the transform geometry."""

    bins: np.ndarray            # [F, N] complex128
    frame_hop: int
    window_len: int
    sample_rate: int = 16000

    def __post_init__(self):
        self.bins = np.asarray(self.bins, dtype=np.complex128)

    @property
    def n_bands(self) -> int:
        return self.bins.shape[0]

    @property
    def n_frames(self) -> int:
        return self.bins.shape[1]


@dataclass
class Segment:
    """One fixed-length chunk of a spectrogram.

    ``valid_frames`` is the number of leading frames that carry signal; the
    remainder (if any) is zero padding added to reach the segment length.
    """

    spec: Spectrogram
    valid_frames: int


def _hann(window_len: int) -> np.ndarray:
    return get_window("hann", window_len, fftbins=True)


def analyze(w: Waveform, window_len: int = 1024, hop: int = 256) -> Spectrogram:
    """Hann-windowed one-sided STFT of ``w`` with the DC row dropped.

    Returns a Spectrogram with ``window_len // 2`` rows and
    ``1 + len(w) // hop`` frames.
    """
    if len(w) == 0:
        raise InvalidInputError("cannot analyze an empty waveform")
    if not np.all(np.isfinite(w.samples)):
        raise InvalidInputError("waveform contains non-finite samples")
    if window_len % 2 != 0:
        raise InvalidInputError(f"window_len must be even, got {window_len}")
    if not 1 <= hop <= window_len:
        raise InvalidInputError(f"hop must be in [1, window_len], got {hop}")

    half = window_len // 2
    if len(w) > 1:
        padded = np.pad(w.samples, half, mode="reflect")
    else:
        padded = np.pad(w.samples, half, mode="edge")
    n_frames = 1 + len(w) // hop
    window = _hann(window_len)

    starts = np.arange(n_frames) * hop
    frames = padded[starts[:, None] + np.arange(window_len)] * window  # [N, L]
    spectrum = np.fft.rfft(frames, axis=1)                             # [N, L/2+1]
    bins = spectrum[:, 1:].T.astype(np.complex128)                     # drop DC row
    return Spectrogram(bins, frame_hop=hop, window_len=window_len,
                       sample_rate=w.sample_rate)


def synthesize(s: Spectrogram, num_samples: int | None = None) -> Waveform:
    """Overlap-add inverse of :func:`analyze`.

    A zero DC row is reinserted before inversion. The output has
    ``(N - 1) * hop`` samples unless ``num_samples`` asks for a different
    length (shorter output is trimmed, longer is zero-extended).
    """
    half = s.window_len // 2
    if s.n_bands != half:
        raise ShapeError(
            f"spectrogram has {s.n_bands} rows, expected window_len/2 = {half}"
        )
    hop, window_len = s.frame_hop, s.window_len
    n_frames = s.n_frames
    window = _hann(window_len)

    full = np.zeros((n_frames, half + 1), dtype=np.complex128)
    full[:, 1:] = s.bins.T
    frames = np.fft.irfft(full, n=window_len, axis=1) * window

    out_len = (n_frames - 1) * hop + window_len
    out = np.zeros(out_len)
    wss = np.zeros(out_len)
    for n in range(n_frames):
        sl = slice(n * hop, n * hop + window_len)
        out[sl] += frames[n]
        wss[sl] += window ** 2
    good = wss > 1e-12
    out[good] /= wss[good]

    # strip the analysis padding; up to half a window beyond the natural
    # (N-1)*hop samples is still covered by the frames and reconstructible
    available = out[half:]
    natural = (n_frames - 1) * hop
    if num_samples is None:
        samples = available[:natural]
    elif num_samples <= len(available):
        samples = available[:num_samples]
    else:
        samples = np.pad(available, (0, num_samples - len(available)))
    return Waveform(samples, s.sample_rate)


def segment(s: Spectrogram, frames_per_segment: int) -> list[Segment]:
    """Split ``s`` into non-overlapping chunks of ``frames_per_segment`` frames.

    The final chunk is zero-padded to full length; its true frame count is
    recorded in ``valid_frames``.
    """
    if frames_per_segment <= 0:
        raise InvalidInputError(
            f"frames_per_segment must be positive, got {frames_per_segment}"
        )
    out = []
    for start in range(0, s.n_frames, frames_per_segment):
        chunk = s.bins[:, start:start + frames_per_segment]
        valid = chunk.shape[1]
        if valid < frames_per_segment:
            chunk = np.pad(chunk, ((0, 0), (0, frames_per_segment - valid)))
        out.append(Segment(
            Spectrogram(chunk, s.frame_hop, s.window_len, s.sample_rate),
            valid_frames=valid,
        ))
    return out

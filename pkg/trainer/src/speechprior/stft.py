"""Analysis front end, matching the engine's transform.

Hann window (periodic), reflect padding of half a window, centred frames
(1 + len//hop of them), one-sided spectrum with the DC row dropped and the
Nyquist row kept. Must agree with the engine's analyze on the shared
fixture waveform within 1e-5.
"""

import numpy as np
import torch


def analyze(samples: torch.Tensor, window_len: int = 1024,
            hop: int = 256) -> torch.Tensor:
    """Complex spectrogram [window_len//2, 1 + len//hop] of a 1-D signal."""
    if samples.dim() != 1:
        raise ValueError(f"expected a mono signal, got shape {tuple(samples.shape)}")
    window = torch.hann_window(window_len, periodic=True,
                               dtype=samples.dtype)
    spec = torch.stft(samples, n_fft=window_len, hop_length=hop,
                      window=window, center=True, pad_mode="reflect",
                      onesided=True, return_complex=True)
    return spec[1:, :]  # drop DC


def magnitude(samples: torch.Tensor, window_len: int = 1024,
              hop: int = 256) -> torch.Tensor:
    return analyze(samples, window_len, hop).abs()


def read_wav(path) -> tuple[torch.Tensor, int]:
    """Mono PCM16/float32 WAV as a float32 tensor in [-1, 1]."""
    from scipy.io import wavfile

    rate, data = wavfile.read(path)
    if data.ndim != 1:
        raise ValueError(f"{path}: expected mono audio, got {data.shape[1]} channels")
    if data.dtype == np.int16:
        data = data.astype(np.float32) / 32768.0
    return torch.from_numpy(np.ascontiguousarray(data, dtype=np.float32)), int(rate)

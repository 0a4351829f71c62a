"""Export per-utterance prior variances for the dereverberation engine.

Wire format (little-endian): magic ``SPRV``, u32 version=1, u32 F, u32 N,
then F*N float32 values in band-major order.
"""

import struct

import numpy as np
import torch

from .model import PriorNet
from .stft import magnitude

_HEADER = struct.Struct("<4sIII")
_MAGIC = b"SPRV"
_VERSION = 1


def write_prior_file(path, var: np.ndarray) -> None:
    f_bands, n_frames = var.shape
    with open(path, "wb") as fh:
        fh.write(_HEADER.pack(_MAGIC, _VERSION, f_bands, n_frames))
        fh.write(np.ascontiguousarray(var, dtype="<f4").tobytes())


def infer_prior(model: PriorNet, samples: torch.Tensor, seed: int = 0,
                window_len: int = 1024, hop: int = 256,
                use_mean: bool = False) -> np.ndarray:
    """Prior variance [F, N] for one waveform.

    The encoder consumes the (possibly reverberant) input; the latent
    sequence is drawn once by reparameterization (or fixed to the
    posterior mean with ``use_mean``) and decoded.
    """
    mag = magnitude(samples, window_len, hop).unsqueeze(0)
    model.eval()
    with torch.no_grad():
        torch.manual_seed(seed)
        z, mean, _ = model.encoder(mag)
        var = model.decoder(mean if use_mean else z)
    return var[0].numpy().astype(np.float32)


def export_prior(model: PriorNet, samples: torch.Tensor, out_path,
                 seed: int = 0, window_len: int = 1024, hop: int = 256,
                 use_mean: bool = False) -> np.ndarray:
    var = infer_prior(model, samples, seed=seed, window_len=window_len,
                      hop=hop, use_mean=use_mean)
    write_prior_file(out_path, var)
    return var

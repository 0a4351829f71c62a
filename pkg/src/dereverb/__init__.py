"""Single-channel speech dereverberation in the STFT domain.

The observed spectrogram is modelled per frequency band as a short causal
complex filter (a convolutive transfer function) applied to the clean band
signal plus stationary Gaussian noise. Given a per-bin prior variance of the
clean speech, an EM loop alternates Gaussian posterior inference of the
clean spectrogram with closed-form updates of the filter and noise power.
The posterior solve exploits the banded structure of the precision matrix,
so one EM round costs O(F N P^2) instead of the dense O(F N^3).
"""

from .audio import Waveform, read_wav, write_wav
from .ctf import (BandedLowerToeplitz, CtfFilter, NoiseVariance, apply_ctf,
                  build_banded_convolution, observation_loglik)
from .em import (EmConfig, EmState, PosteriorStats, e_step, init_state,
                 m_step_ctf, m_step_noise, run_em, surrogate_objective)
from .errors import (DataError, DereverbError, FormatError, InvalidInputError,
                     NumericalError, ShapeError)
from .metrics import MetricReport, is_divergence, kl_diag_gauss, sisdr
from .prior import (PRIOR_FLOOR, PriorVariance, constant_prior,
                    heuristic_prior, load_prior, resolve_prior_spec,
                    save_prior)
from .stft import Segment, Spectrogram, analyze, segment, synthesize

__version__ = "0.1.0"

__all__ = [
    "Waveform", "read_wav", "write_wav",
    "Spectrogram", "Segment", "analyze", "synthesize", "segment",
    "CtfFilter", "NoiseVariance", "BandedLowerToeplitz",
    "apply_ctf", "build_banded_convolution", "observation_loglik",
    "PriorVariance", "PRIOR_FLOOR", "heuristic_prior", "constant_prior",
    "load_prior", "save_prior", "resolve_prior_spec",
    "EmConfig", "EmState", "PosteriorStats", "init_state", "e_step",
    "m_step_ctf", "m_step_noise", "run_em", "surrogate_objective",
    "MetricReport", "sisdr", "is_divergence", "kl_diag_gauss",
    "DereverbError", "InvalidInputError", "ShapeError", "FormatError",
    "DataError", "NumericalError",
]

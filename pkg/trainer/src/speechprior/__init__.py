"""Recurrent-VAE trainer for per-bin clean-speech prior variances.

Learns p(S|Z) with a zero-mean complex-Gaussian decoder whose diagonal
variance it emits; that variance is exported per utterance in a small
binary format and consumed by the dereverberation engine as its clean
speech prior. Training is unsupervised on clean speech, with optional
supervised fine-tuning on reverberant/clean pairs.
"""

from .data import make_clean_corpus, make_paired_corpus
from .export import export_prior, infer_prior, write_prior_file
from .losses import elbo_loss, is_divergence, kl_diag_gauss, kl_warmup_weight
from .model import LATENT_DIM, N_BANDS, PriorNet, build_network, parameter_count
from .stft import analyze, magnitude, read_wav
from .train import (TrainConfig, finetune_supervised, load_checkpoint,
                    save_checkpoint, train_unsupervised)

__version__ = "0.1.0"

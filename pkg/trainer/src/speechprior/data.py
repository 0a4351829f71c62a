"""Desk-scale synthetic speech corpus.

Harmonic-plus-noise utterances with bursty amplitude envelopes stand in
for recorded speech. Reverberant versions are made by convolving with an
exponentially decaying noise tail, the usual stand-in for a room response.
"""

import numpy as np
import torch

from .stft import magnitude

SAMPLE_RATE = 16000


def synth_utterance(rng, n_samples):
    """One harmonic-plus-noise pseudo-utterance, amplitude-normalized."""
    t = np.arange(n_samples)
    env = np.zeros(n_samples)
    pos = 0
    while pos < n_samples:
        burst = int(rng.integers(1200, 5000))
        gap = int(rng.integers(600, 3000))
        seg = np.hanning(burst)[:max(0, n_samples - pos)]
        env[pos:pos + len(seg)] = seg
        pos += burst + gap
    f0 = float(rng.uniform(90, 220))
    vibrato = 1.0 + 0.01 * np.sin(2 * np.pi * 5.0 * t / SAMPLE_RATE)
    harmonics = sum(
        (0.5 / (k + 1)) * np.sin(2 * np.pi * f0 * (k + 1) * vibrato * t / SAMPLE_RATE
                                 + rng.uniform(0, 2 * np.pi))
        for k in range(10))
    x = env * (0.7 * harmonics + 0.3 * rng.standard_normal(n_samples))
    x = x + 1e-4 * rng.standard_normal(n_samples)
    return (x / (np.abs(x).max() + 1e-9)).astype(np.float32)


def synth_rir(rng, length=2000, decay=0.996):
    """Exponentially decaying noise tail with a unit direct path."""
    rir = rng.standard_normal(length) * decay ** np.arange(length)
    rir[0] = 1.0
    rir[1:] *= 0.5
    return rir.astype(np.float32)


def reverberate(clean, rir):
    wet = np.convolve(clean, rir)[:len(clean)]
    return (wet / (np.abs(wet).max() + 1e-9)).astype(np.float32)


def magnitude_segments(waveform, n_frames, window_len=1024, hop=256):
    """Non-overlapping [512, n_frames] magnitude chunks of one waveform."""
    mag = magnitude(torch.from_numpy(waveform), window_len, hop)
    return [mag[:, i:i + n_frames]
            for i in range(0, mag.shape[1] - n_frames + 1, n_frames)]


def make_clean_corpus(n_utterances, n_frames=32, seed=0,
                      utt_seconds=1.2):
    """List of [512, n_frames] magnitude tensors of clean utterances."""
    rng = np.random.default_rng(seed)
    out = []
    n_samples = int(utt_seconds * SAMPLE_RATE)
    while len(out) < n_utterances:
        out.extend(magnitude_segments(synth_utterance(rng, n_samples), n_frames))
    return out[:n_utterances]


def make_paired_corpus(n_pairs, n_frames=32, seed=0, utt_seconds=1.2):
    """List of (reverberant_mag, clean_mag) pairs with a fresh RIR per
    utterance."""
    rng = np.random.default_rng(seed)
    out = []
    n_samples = int(utt_seconds * SAMPLE_RATE)
    while len(out) < n_pairs:
        clean = synth_utterance(rng, n_samples)
        wet = reverberate(clean, synth_rir(rng))
        clean_segs = magnitude_segments(clean, n_frames)
        wet_segs = magnitude_segments(wet, n_frames)
        out.extend(zip(wet_segs, clean_segs))
    return out[:n_pairs]

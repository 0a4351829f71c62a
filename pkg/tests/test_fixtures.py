"""The committed fixture files are a wire contract with external trainers;
they must stay consistent with the current implementation."""

import json
from pathlib import Path

import numpy as np
import pytest

from dereverb import analyze, is_divergence, kl_diag_gauss, read_wav

FIXTURES = Path(__file__).resolve().parent.parent / "fixtures"


def test_committed_loss_vectors_match_implementation():
    data = json.loads((FIXTURES / "loss_vectors.json").read_text())
    for case in data["is_divergence"]:
        got = is_divergence(np.array(case["power_a"]), np.array(case["power_b"]))
        assert got == pytest.approx(case["expected"], rel=1e-12)
    for case in data["kl_diag_gauss"]:
        got = kl_diag_gauss(np.array(case["mean"]), np.array(case["var"]))
        assert got == pytest.approx(case["expected"], rel=1e-12)
    for case in data["combined"]:
        got = (is_divergence(np.array(case["s_power"]),
                             np.array(case["decoder_var"]))
               + kl_diag_gauss(np.array(case["enc_mean"]),
                               np.array(case["enc_var"])))
        assert got == pytest.approx(case["expected"], rel=1e-12)


def test_committed_stft_reference_matches_analyze():
    ref = np.load(FIXTURES / "stft_check_ref.npz")
    w = read_wav(FIXTURES / "stft_check.wav")
    spec = analyze(w, window_len=int(ref["window_len"]), hop=int(ref["hop"]))
    stored = ref["bins"].astype(np.complex128)
    err = np.abs(spec.bins - stored).max()
    assert err < 1e-5 * np.abs(stored).max()

"""Smoke training runs: the held-out loss must improve over the first
epoch's value, unsupervised and fine-tuned."""

import pytest
import torch

from speechprior import (TrainConfig, finetune_supervised, make_clean_corpus,
                         make_paired_corpus, train_unsupervised)
from speechprior.train import _step_loss

from setups import FINETUNE_CFG, UNSUP_CFG


def test_unsupervised_heldout_loss_decreases(unsup_run):
    _, history = unsup_run
    # history[0] is the pre-training reference, history[1] after epoch 1
    assert len(history) == UNSUP_CFG.epochs + 1
    assert min(history[2:]) < history[1]
    assert min(history) < history[0]


def test_finetune_heldout_loss_decreases(finetuned_run):
    _, history = finetuned_run
    assert len(history) == FINETUNE_CFG.epochs + 1
    assert min(history[1:]) < history[0]


def test_identical_pair_reduces_to_unsupervised_loss(unsup_run):
    # fine-tuning on (X, S) with X == S is the unsupervised objective
    model, _ = unsup_run
    model.eval()
    mag = make_clean_corpus(1, n_frames=32, seed=5)[0].unsqueeze(0)
    with torch.no_grad():
        torch.manual_seed(0)
        unsup = float(_step_loss(model, mag, mag, 1.0))
        torch.manual_seed(0)
        paired = float(_step_loss(model, mag.clone(), mag.clone(), 1.0))
    model.train()
    assert paired == pytest.approx(unsup, rel=1e-7)


def test_empty_corpus_rejected():
    with pytest.raises(ValueError):
        train_unsupervised([], TrainConfig(epochs=1))


def test_mismatched_pair_shapes_rejected(unsup_run):
    model, _ = unsup_run
    wet = torch.rand(512, 16) + 0.01
    dry = torch.rand(512, 24) + 0.01
    with pytest.raises(ValueError, match="mismatch"):
        finetune_supervised(model, [(wet, dry)], TrainConfig(epochs=1))


def test_paired_corpus_shapes():
    pairs = make_paired_corpus(3, n_frames=16, seed=2)
    assert len(pairs) == 3
    for wet, dry in pairs:
        assert wet.shape == dry.shape == (512, 16)
        assert not torch.equal(wet, dry)  # reverberation changed the input

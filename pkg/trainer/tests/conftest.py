import pytest

from speechprior import (finetune_supervised, make_clean_corpus,
                         make_paired_corpus, train_unsupervised)

from setups import FINETUNE_CFG, UNSUP_CFG


@pytest.fixture(scope="session")
def unsup_run():
    corpus = make_clean_corpus(24, n_frames=32, seed=0)
    model, history = train_unsupervised(corpus, UNSUP_CFG)
    return model, history


@pytest.fixture(scope="session")
def finetuned_run(unsup_run):
    model, _ = unsup_run
    pairs = make_paired_corpus(16, n_frames=32, seed=1)
    model, history = finetune_supervised(model, pairs, FINETUNE_CFG)
    return model, history

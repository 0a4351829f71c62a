"""Loss cross-checks against the engine's golden fixture vectors, plus the
KL warm-up schedule."""

import json
from pathlib import Path

import pytest
import torch

from speechprior import (TrainConfig, elbo_loss, is_divergence, kl_diag_gauss,
                         kl_warmup_weight)

FIXTURES = Path(__file__).resolve().parents[2] / "fixtures"


def _t(x):
    return torch.tensor(x, dtype=torch.float64)


def test_losses_match_engine_golden_fixtures():
    data = json.loads((FIXTURES / "loss_vectors.json").read_text())
    for case in data["is_divergence"]:
        got = float(is_divergence(_t(case["power_a"]), _t(case["power_b"])))
        assert got == pytest.approx(case["expected"], rel=1e-6)
    for case in data["kl_diag_gauss"]:
        got = float(kl_diag_gauss(_t(case["mean"]), _t(case["var"]).log()))
        assert got == pytest.approx(case["expected"], rel=1e-6)
    for case in data["combined"]:
        got = float(elbo_loss(_t(case["s_power"]), _t(case["decoder_var"]),
                              _t(case["enc_mean"]), _t(case["enc_var"]).log()))
        assert got == pytest.approx(case["expected"], rel=1e-6)


def test_loss_vanishes_at_perfect_fit():
    power = _t([[1.0, 2.0], [0.5, 3.0]])
    mean = torch.zeros(3, 2, dtype=torch.float64)
    logvar = torch.zeros(3, 2, dtype=torch.float64)
    assert float(elbo_loss(power, power, mean, logvar)) == pytest.approx(0.0)


def test_loss_nonnegative():
    gen = torch.Generator().manual_seed(0)
    for _ in range(20):
        a = torch.rand(4, 6, generator=gen) * 5 + 0.1
        b = torch.rand(4, 6, generator=gen) * 5 + 0.1
        mean = torch.randn(2, 6, generator=gen)
        logvar = torch.randn(2, 6, generator=gen)
        assert float(elbo_loss(a, b, mean, logvar)) >= -1e-9


def test_kl_warmup_schedule_endpoints():
    total = 400  # 4 cycles of 100 steps
    assert kl_warmup_weight(0, total) == 0.0
    assert kl_warmup_weight(50, total) == 1.0   # cycle midpoint
    assert kl_warmup_weight(99, total) == 1.0   # second half stays flat
    assert kl_warmup_weight(100, total) == 0.0  # next cycle restarts
    assert kl_warmup_weight(25, total) == pytest.approx(0.5)


def test_training_defaults():
    cfg = TrainConfig()
    assert cfg.learning_rate == 1e-4
    assert cfg.batch_size == 64

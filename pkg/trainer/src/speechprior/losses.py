"""Training losses: Itakura-Saito reconstruction plus KL to the standard
Gaussian. Sums over entries, matching the engine's golden fixtures."""

import torch


def is_divergence(power_a: torch.Tensor, power_b: torch.Tensor) -> torch.Tensor:
    """sum over entries of a/b - ln(a/b) - 1 (both strictly positive)."""
    ratio = power_a / power_b
    return (ratio - torch.log(ratio) - 1.0).sum()


def kl_diag_gauss(mean: torch.Tensor, logvar: torch.Tensor) -> torch.Tensor:
    """KL(N(mean, diag(exp(logvar))) || N(0, I)), summed over entries."""
    return 0.5 * (logvar.exp() + mean ** 2 - 1.0 - logvar).sum()


def elbo_loss(s_power: torch.Tensor, decoder_var: torch.Tensor,
              enc_mean: torch.Tensor, enc_logvar: torch.Tensor,
              kl_weight: float = 1.0) -> torch.Tensor:
    """Negative evidence lower bound (up to constants), summed over entries.

    With ``kl_weight=1`` this equals is_divergence + kl_diag_gauss exactly,
    which is what the cross-component fixtures check.
    """
    return (is_divergence(s_power, decoder_var)
            + kl_weight * kl_diag_gauss(enc_mean, enc_logvar))


def kl_warmup_weight(step: int, total_steps: int, cycles: int = 4) -> float:
    """Cyclical KL annealing: 0 at each cycle start, ramping to 1 at the
    cycle midpoint, flat at 1 for the second half."""
    cycle_len = max(1, total_steps // cycles)
    position = (step % cycle_len) / cycle_len
    return min(1.0, 2.0 * position)

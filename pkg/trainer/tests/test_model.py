import torch

from speechprior import build_network, parameter_count
from speechprior.model import LATENT_DIM


def test_parameter_budget():
    n = parameter_count(build_network(0))
    assert 6.3e6 <= n <= 7.7e6, f"{n} parameters"


def test_same_seed_same_weights():
    a = build_network(7)
    b = build_network(7)
    for (na, pa), (nb, pb) in zip(a.named_parameters(), b.named_parameters()):
        assert na == nb
        assert torch.equal(pa, pb)
    c = build_network(8)
    assert any(not torch.equal(pa, pc)
               for (_, pa), (_, pc) in zip(a.named_parameters(),
                                           c.named_parameters()))


def test_forward_on_zeros_is_finite_and_positive():
    model = build_network(0).eval()
    with torch.no_grad():
        var, z, mean, logvar = model(torch.zeros(1, 512, 40))
    assert var.shape == (1, 512, 40)
    assert z.shape == (1, 40, LATENT_DIM)
    assert torch.isfinite(var).all()
    assert (var > 0).all()


def test_posterior_uses_whole_input_but_latent_chain_is_causal():
    model = build_network(0).eval()
    n_frames = 12
    gen = torch.Generator().manual_seed(3)
    mag = torch.rand(1, 512, n_frames, generator=gen) + 0.01
    eps = torch.randn(1, n_frames, LATENT_DIM, generator=gen)

    with torch.no_grad():
        _, mean_a, _ = model.encoder(mag, eps=eps)

        # perturbing the input at the last frame moves the posterior mean
        # at the first frame: the encoder is bidirectional over the input
        mag_b = mag.clone()
        mag_b[:, :, -1] *= 4.0
        _, mean_b, _ = model.encoder(mag_b, eps=eps)
    assert (mean_b[:, 0] - mean_a[:, 0]).abs().max() > 0

    # perturbing the sampled latent at frame k changes posteriors only
    # for frames after k: the latent recurrence is strictly causal
    k = 5
    eps_c = eps.clone()
    eps_c[:, k] += 10.0
    with torch.no_grad():
        _, mean_c, _ = model.encoder(mag, eps=eps_c)
    assert torch.equal(mean_c[:, :k + 1], mean_a[:, :k + 1])
    assert (mean_c[:, k + 1:] - mean_a[:, k + 1:]).abs().max() > 0

"""Recurrent VAE over magnitude spectrograms.

Encoder: conv feature extraction over the 512 frequency bins, a
bidirectional GRU over time (so the posterior at frame n sees the whole
input), and a forward GRU over the previously sampled latents (so the
latent chain is strictly causal). Two small MLP heads emit the mean and
log-variance of q(z_n | z_{<n}, S).

Decoder: bidirectional GRU over the latent sequence, then transposed
convs back up to the 512 bins. The output y parameterizes the per-bin
clean-speech prior variance as [exp(y)]^2, guaranteeing positivity.

Latent dimension 32, ~7.0M parameters total.
"""

import torch
from torch import nn

N_BANDS = 512
LATENT_DIM = 32
CONV_CH = 64
GRU_HIDDEN = 512
ZGRU_HIDDEN = 256
MLP_HIDDEN = 256
DROPOUT = 0.2
POWER_FLOOR = 1e-16
_Y_CLAMP = 40.0


class ResModule(nn.Module):
    def __init__(self):
        super().__init__()
        self.act = nn.LeakyReLU(0.2)
        self.conv1 = nn.Conv2d(CONV_CH, CONV_CH, 3, padding=1)
        self.conv2 = nn.Conv2d(CONV_CH, CONV_CH, 3, padding=1)
        self.drop = nn.Dropout(DROPOUT)

    def forward(self, x):
        h = self.conv1(self.act(x))
        h = self.conv2(self.act(h))
        return x + self.drop(h)


def _res_stack():
    return nn.Sequential(*[ResModule() for _ in range(8)])


def _mlp(in_dim):
    return nn.Sequential(
        nn.Linear(in_dim, MLP_HIDDEN), nn.Tanh(), nn.Dropout(DROPOUT),
        nn.Linear(MLP_HIDDEN, MLP_HIDDEN), nn.Tanh(), nn.Dropout(DROPOUT),
        nn.Linear(MLP_HIDDEN, LATENT_DIM),
    )


class Encoder(nn.Module):
    def __init__(self):
        super().__init__()
        self.conv_in = nn.Conv2d(1, CONV_CH, (4, 3), stride=(4, 1),
                                 padding=(0, 1))            # 512 -> 128
        self.res = _res_stack()
        self.down = nn.Sequential(
            nn.Conv2d(CONV_CH, CONV_CH, (4, 3), (4, 1), (0, 1)),  # 128 -> 32
            nn.LeakyReLU(0.2),
            nn.Conv2d(CONV_CH, CONV_CH, (4, 3), (4, 1), (0, 1)),  # 32 -> 8
            nn.LeakyReLU(0.2),
            nn.Conv2d(CONV_CH, CONV_CH, (2, 3), (2, 1), (0, 1)),  # 8 -> 4
        )
        self.bigru = nn.GRU(CONV_CH * 4, GRU_HIDDEN, batch_first=True,
                            bidirectional=True)
        self.z_cell = nn.GRUCell(LATENT_DIM, ZGRU_HIDDEN)
        self.mlp_mean = _mlp(2 * GRU_HIDDEN + ZGRU_HIDDEN)
        self.mlp_logvar = _mlp(2 * GRU_HIDDEN + ZGRU_HIDDEN)

    def features(self, mag):
        """Per-frame features of the whole input, [B, N, 1024].

        The input map is the log of the per-bin power."""
        x = torch.log((mag ** 2).clamp_min(POWER_FLOOR)).unsqueeze(1)
        h = self.conv_in(x)
        h = self.res(h)
        h = self.down(h)                       # [B, C, 4, N]
        h = h.flatten(1, 2).transpose(1, 2)    # [B, N, 256]
        out, _ = self.bigru(h)
        return out

    def forward(self, mag, eps=None):
        """Sample the latent chain; returns (z, mean, logvar), each [B, N, D].

        ``eps`` fixes the reparameterization noise (shape [B, N, D]) for
        deterministic runs.
        """
        feats = self.features(mag)
        batch, n_frames, _ = feats.shape
        z_prev = feats.new_zeros(batch, LATENT_DIM)
        h_z = feats.new_zeros(batch, ZGRU_HIDDEN)
        zs, means, logvars = [], [], []
        for n in range(n_frames):
            h_z = self.z_cell(z_prev, h_z)
            joint = torch.cat([feats[:, n], h_z], dim=1)
            mean = self.mlp_mean(joint)
            logvar = self.mlp_logvar(joint).clamp(-14.0, 14.0)
            noise = torch.randn_like(mean) if eps is None else eps[:, n]
            z = mean + torch.exp(0.5 * logvar) * noise
            zs.append(z)
            means.append(mean)
            logvars.append(logvar)
            z_prev = z
        stack = lambda t: torch.stack(t, dim=1)
        return stack(zs), stack(means), stack(logvars)


class Decoder(nn.Module):
    def __init__(self):
        super().__init__()
        self.z_gru = nn.GRU(LATENT_DIM, GRU_HIDDEN, batch_first=True,
                            bidirectional=True)
        self.project = nn.Linear(2 * GRU_HIDDEN, CONV_CH * 8)
        self.up = nn.Sequential(
            nn.ConvTranspose2d(CONV_CH, CONV_CH, (4, 3), (4, 1), (0, 1)),  # 8 -> 32
            nn.LeakyReLU(0.2),
            nn.ConvTranspose2d(CONV_CH, CONV_CH, (4, 3), (4, 1), (0, 1)),  # 32 -> 128
        )
        self.res = _res_stack()
        self.up_final = nn.ConvTranspose2d(CONV_CH, CONV_CH, (4, 3), (4, 1),
                                           (0, 1))                         # 128 -> 512
        self.conv_out = nn.Conv2d(CONV_CH, 1, 3, padding=1)

    def forward(self, z):
        """Prior variance [B, F, N] for a latent sequence [B, N, D]."""
        h, _ = self.z_gru(z)
        h = self.project(h)                                  # [B, N, 512]
        batch, n_frames, _ = h.shape
        h = h.view(batch, n_frames, CONV_CH, 8).permute(0, 2, 3, 1)
        h = self.up(h)
        h = self.res(h)
        h = self.up_final(h)
        y = self.conv_out(h).squeeze(1).clamp(-_Y_CLAMP, _Y_CLAMP)
        return torch.exp(2.0 * y)


class PriorNet(nn.Module):
    """Encoder + decoder. ``forward`` maps magnitudes to prior variances."""

    def __init__(self):
        super().__init__()
        self.encoder = Encoder()
        self.decoder = Decoder()

    def forward(self, mag, eps=None):
        z, mean, logvar = self.encoder(mag, eps=eps)
        return self.decoder(z), z, mean, logvar


def build_network(seed: int = 0) -> PriorNet:
    torch.manual_seed(seed)
    return PriorNet()


def parameter_count(model: nn.Module) -> int:
    return sum(p.numel() for p in model.parameters())

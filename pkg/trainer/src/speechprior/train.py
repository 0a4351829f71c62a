"""Training loops: unsupervised on clean speech, supervised fine-tuning on
reverberant/clean pairs. Both minimize the Itakura-Saito reconstruction of
the clean power plus a cyclically warmed-up KL term."""

from dataclasses import asdict, dataclass

import torch
from torch import nn

from .losses import elbo_loss, kl_warmup_weight
from .model import PriorNet, build_network

POWER_FLOOR = 1e-8


@dataclass
class TrainConfig:
    epochs: int = 5
    batch_size: int = 64
    learning_rate: float = 1e-4   # AdamW maximum
    kl_cycles: int = 4
    holdout_fraction: float = 0.2
    seed: int = 0


def _batches(items, batch_size, generator):
    order = torch.randperm(len(items), generator=generator).tolist()
    for start in range(0, len(order), batch_size):
        yield [items[i] for i in order[start:start + batch_size]]


def _step_loss(model, input_mag, target_mag, kl_weight):
    """Per-bin-normalized loss of one batch: encoder sees ``input_mag``,
    the reconstruction target is ``target_mag`` power."""
    var, _, mean, logvar = model(input_mag)
    target_pow = (target_mag ** 2).clamp_min(POWER_FLOOR)
    raw = elbo_loss(target_pow, var, mean, logvar, kl_weight=kl_weight)
    return raw / target_pow.numel()


def _run_training(model, pairs, cfg: TrainConfig):
    """Shared loop over (input_mag, target_mag) pairs.

    Returns (best_model_state, history) where history has per-epoch
    held-out losses (KL at full weight so epochs are comparable).
    """
    if not pairs:
        raise ValueError("empty corpus")
    gen = torch.Generator().manual_seed(cfg.seed)
    n_hold = max(1, int(len(pairs) * cfg.holdout_fraction))
    holdout, training = pairs[:n_hold], pairs[n_hold:]
    if not training:
        raise ValueError("corpus too small for a held-out split")

    opt = torch.optim.AdamW(model.parameters(), lr=cfg.learning_rate)
    steps_per_epoch = (len(training) + cfg.batch_size - 1) // cfg.batch_size
    total_steps = max(1, cfg.epochs * steps_per_epoch)

    def holdout_loss():
        model.eval()
        with torch.no_grad():
            torch.manual_seed(cfg.seed)  # fixed sampling noise per eval
            vals = [_step_loss(model, inp.unsqueeze(0), tgt.unsqueeze(0), 1.0)
                    for inp, tgt in holdout]
        model.train()
        return float(torch.stack(vals).mean())

    history = [holdout_loss()]  # epoch-0 reference before any update
    best = {k: v.clone() for k, v in model.state_dict().items()}
    best_loss = history[0]
    step = 0
    for _ in range(cfg.epochs):
        for batch in _batches(training, cfg.batch_size, gen):
            inp = torch.stack([b[0] for b in batch])
            tgt = torch.stack([b[1] for b in batch])
            loss = _step_loss(model, inp, tgt,
                              kl_warmup_weight(step, total_steps, cfg.kl_cycles))
            opt.zero_grad()
            loss.backward()
            nn.utils.clip_grad_norm_(model.parameters(), 5.0)
            opt.step()
            step += 1
        history.append(holdout_loss())
        if history[-1] < best_loss:
            best_loss = history[-1]
            best = {k: v.clone() for k, v in model.state_dict().items()}
    model.load_state_dict(best)
    return history


def train_unsupervised(clean_corpus, cfg: TrainConfig = TrainConfig(),
                       model: PriorNet | None = None):
    """Train on clean magnitudes only (encoder input == target).

    Returns (model, history of held-out losses, index 0 = before training).
    """
    if model is None:
        model = build_network(cfg.seed)
    history = _run_training(model, [(m, m) for m in clean_corpus], cfg)
    return model, history


def finetune_supervised(model: PriorNet, paired_corpus,
                        cfg: TrainConfig = TrainConfig()):
    """Fine-tune a trained model on (reverberant, clean) magnitude pairs:
    the encoder consumes the reverberant input, the reconstruction target
    stays clean."""
    for wet, dry in paired_corpus:
        if wet.shape != dry.shape:
            raise ValueError(
                f"pair shape mismatch: {tuple(wet.shape)} vs {tuple(dry.shape)}")
    history = _run_training(model, list(paired_corpus), cfg)
    return model, history


def save_checkpoint(path, model: PriorNet, cfg: TrainConfig, history):
    torch.save({"state_dict": model.state_dict(),
                "train_config": asdict(cfg),
                "holdout_history": list(history)}, path)


def load_checkpoint(path) -> PriorNet:
    blob = torch.load(path, map_location="cpu", weights_only=True)
    model = build_network()
    model.load_state_dict(blob["state_dict"])
    model.eval()
    return model

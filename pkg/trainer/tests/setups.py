"""Shared training configurations for the smoke/interop fixtures."""

from speechprior import TrainConfig

# one real (small) training run shared across the suite
UNSUP_CFG = TrainConfig(epochs=5, batch_size=6, seed=0)
FINETUNE_CFG = TrainConfig(epochs=4, batch_size=4, seed=1)

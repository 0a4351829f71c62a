"""Trainer command line: train / finetune / export."""

import argparse
import sys

import torch

from .data import make_clean_corpus, make_paired_corpus
from .export import export_prior
from .stft import read_wav
from .train import (TrainConfig, finetune_supervised, load_checkpoint,
                    save_checkpoint, train_unsupervised)


def build_parser():
    parser = argparse.ArgumentParser(
        prog="speechprior",
        description="Train a recurrent VAE clean-speech prior and export "
                    "per-utterance prior variances for the dereverb engine.")
    sub = parser.add_subparsers(dest="command", required=True)

    train = sub.add_parser("train", help="unsupervised training on clean speech")
    train.add_argument("--out", required=True, help="checkpoint path")
    train.add_argument("--utterances", type=int, default=200,
                       help="synthetic corpus size")
    train.add_argument("--frames", type=int, default=32,
                       help="frames per training segment")
    train.add_argument("--epochs", type=int, default=5)
    train.add_argument("--batch-size", type=int, default=64)
    train.add_argument("--learning-rate", type=float, default=1e-4)
    train.add_argument("--seed", type=int, default=0)

    ft = sub.add_parser("finetune",
                        help="supervised fine-tuning on reverberant/clean pairs")
    ft.add_argument("--init", required=True,
                    help="unsupervised checkpoint to start from")
    ft.add_argument("--out", required=True)
    ft.add_argument("--pairs", type=int, default=200)
    ft.add_argument("--frames", type=int, default=32)
    ft.add_argument("--epochs", type=int, default=5)
    ft.add_argument("--batch-size", type=int, default=64)
    ft.add_argument("--learning-rate", type=float, default=1e-4)
    ft.add_argument("--seed", type=int, default=0)

    exp = sub.add_parser("export", help="write a prior file for one WAV")
    exp.add_argument("--checkpoint", required=True)
    exp.add_argument("--input", required=True, help="WAV to infer the prior for")
    exp.add_argument("--out", required=True, help="prior file path (.sprv)")
    exp.add_argument("--seed", type=int, default=0)
    exp.add_argument("--window-len", type=int, default=1024)
    exp.add_argument("--hop", type=int, default=256)
    exp.add_argument("--use-mean", action="store_true",
                     help="decode the posterior mean instead of one sample")
    return parser


def _config(args):
    return TrainConfig(epochs=args.epochs, batch_size=args.batch_size,
                       learning_rate=args.learning_rate, seed=args.seed)


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        if args.command == "train":
            cfg = _config(args)
            corpus = make_clean_corpus(args.utterances, n_frames=args.frames,
                                       seed=args.seed)
            model, history = train_unsupervised(corpus, cfg)
            save_checkpoint(args.out, model, cfg, history)
            print(f"held-out loss: {history[0]:.4f} -> best {min(history):.4f}")
            print(f"saved {args.out}")
        elif args.command == "finetune":
            cfg = _config(args)
            model = load_checkpoint(args.init)
            pairs = make_paired_corpus(args.pairs, n_frames=args.frames,
                                       seed=args.seed)
            model, history = finetune_supervised(model, pairs, cfg)
            save_checkpoint(args.out, model, cfg, history)
            print(f"held-out loss: {history[0]:.4f} -> best {min(history):.4f}")
            print(f"saved {args.out}")
        else:
            model = load_checkpoint(args.checkpoint)
            samples, _ = read_wav(args.input)
            var = export_prior(model, samples, args.out, seed=args.seed,
                               window_len=args.window_len, hop=args.hop,
                               use_mean=args.use_mean)
            print(f"wrote {args.out} (shape {var.shape[0]}x{var.shape[1]})")
        return 0
    except (OSError, ValueError) as exc:
        print(f"speechprior: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())

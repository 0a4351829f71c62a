"""Command line: WAV in, enhanced WAV out, optional JSON run report.

Exit codes: 0 success, 2 I/O failure, 3 file-format error, 4 shape or
configuration error, 5 numerical failure. Each failure prints a one-line
diagnostic to stderr.
"""

import argparse
import json
import sys
import time
from dataclasses import asdict, dataclass
from pathlib import Path

import numpy as np

from .audio import read_wav, write_wav, Waveform
from .em import EmConfig, run_em
from .errors import (DataError, DereverbError, EXIT_CONFIG, EXIT_FORMAT,
                     EXIT_IO, EXIT_NUMERIC, FormatError, InvalidInputError,
                     NumericalError, ShapeError)
from .metrics import sisdr
from .prior import PRIOR_FLOOR, PriorVariance, resolve_prior_spec
from .stft import Spectrogram, analyze, segment, synthesize


@dataclass
class RunConfig:
    input_path: str
    output_path: str
    prior_spec: str = "heuristic"
    ctf_len: int = 30            # P: taps reach back this many frames
    iterations: int = 100
    segment_frames: int = 320
    window_len: int = 1024
    hop: int = 256
    workers: int = 1
    report_path: str | None = None
    reference_path: str | None = None
    output_format: str = "float32"


def _em_config(cfg: RunConfig) -> EmConfig:
    return EmConfig(ctf_order=cfg.ctf_len, iterations=cfg.iterations,
                    workers=cfg.workers)


def run(cfg: RunConfig) -> dict:
    """Enhance one file; returns the report dict (also written to
    ``cfg.report_path`` when set)."""
    if cfg.segment_frames <= cfg.ctf_len:
        raise InvalidInputError(
            f"segment_frames ({cfg.segment_frames}) must exceed ctf_len ({cfg.ctf_len})"
        )
    t0 = time.perf_counter()
    wav_in = read_wav(cfg.input_path)
    spec = analyze(wav_in, window_len=cfg.window_len, hop=cfg.hop)
    prior_full = resolve_prior_spec(cfg.prior_spec, spec)
    em_cfg = _em_config(cfg)

    segments = segment(spec, cfg.segment_frames)
    enhanced_chunks = []
    seg_reports = []
    offset = 0
    for seg in segments:
        lam = prior_full.var[:, offset:offset + seg.valid_frames]
        if seg.valid_frames < cfg.segment_frames:
            pad = cfg.segment_frames - seg.valid_frames
            lam = np.pad(lam, ((0, 0), (0, pad)), constant_values=PRIOR_FLOOR)
        offset += seg.valid_frames
        estimate, state = run_em(seg.spec, PriorVariance(lam), em_cfg)
        enhanced_chunks.append(estimate.bins[:, :seg.valid_frames])
        seg_reports.append({
            "frames": seg.valid_frames,
            "likelihood_history": [float(v) for v in state.history],
            "noise_summary": {
                "min": float(state.noise.power.min()),
                "max": float(state.noise.power.max()),
                "mean": float(state.noise.power.mean()),
            },
        })

    out_spec = Spectrogram(np.concatenate(enhanced_chunks, axis=1),
                           cfg.hop, cfg.window_len, wav_in.sample_rate)
    wav_out = synthesize(out_spec, num_samples=len(wav_in))
    write_wav(cfg.output_path, wav_out, fmt=cfg.output_format)

    metrics: dict = {}
    if cfg.reference_path is not None:
        ref = read_wav(cfg.reference_path)
        n = min(len(ref), len(wav_out), len(wav_in))
        metrics["sisdr_db"] = sisdr(Waveform(ref.samples[:n], ref.sample_rate),
                                    Waveform(wav_out.samples[:n], ref.sample_rate))
        metrics["input_sisdr_db"] = sisdr(Waveform(ref.samples[:n], ref.sample_rate),
                                          Waveform(wav_in.samples[:n], ref.sample_rate))

    report = {
        "config": asdict(cfg),
        "segments": seg_reports,
        "metrics": metrics,
        "timing": {"total_s": time.perf_counter() - t0},
    }
    if cfg.report_path is not None:
        with open(cfg.report_path, "w") as fh:
            json.dump(report, fh, indent=1)
    return report


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="dereverb",
        description="Single-channel speech dereverberation (CTF observation "
                    "model, EM estimation, pluggable speech prior).",
    )
    parser.add_argument("input", nargs="?", help="input WAV (mono PCM16/float32)")
    parser.add_argument("output", nargs="?", help="output WAV path")
    parser.add_argument("--input-dir", help="process every *.wav in this directory")
    parser.add_argument("--output-dir", help="output directory for --input-dir mode")
    parser.add_argument("--prior", default="heuristic",
                        help="heuristic | file:<path> | constant:<value>")
    parser.add_argument("--ctf-len", type=int, default=30, metavar="P",
                        help="filter memory in frames (P+1 taps, default 30)")
    parser.add_argument("--iterations", type=int, default=100)
    parser.add_argument("--segment-frames", type=int, default=320)
    parser.add_argument("--window-len", type=int, default=1024)
    parser.add_argument("--hop", type=int, default=256)
    parser.add_argument("--workers", type=int, default=1,
                        help="parallelism degree across frequency bands")
    parser.add_argument("--report", help="write a JSON run report here")
    parser.add_argument("--reference", help="clean WAV for SISDR reporting")
    parser.add_argument("--output-format", choices=["float32", "pcm16"],
                        default="float32")
    return parser


def _config_from_args(args, input_path, output_path, report_path) -> RunConfig:
    return RunConfig(
        input_path=str(input_path), output_path=str(output_path),
        prior_spec=args.prior, ctf_len=args.ctf_len,
        iterations=args.iterations, segment_frames=args.segment_frames,
        window_len=args.window_len, hop=args.hop, workers=args.workers,
        report_path=report_path, reference_path=args.reference,
        output_format=args.output_format,
    )


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        if args.input_dir is not None:
            if args.output_dir is None:
                raise InvalidInputError("--input-dir requires --output-dir")
            in_dir, out_dir = Path(args.input_dir), Path(args.output_dir)
            if not in_dir.is_dir():
                raise FormatError(f"not a directory: {in_dir}")
            out_dir.mkdir(parents=True, exist_ok=True)
            for wav in sorted(in_dir.glob("*.wav")):
                report = (str(Path(args.report) / f"{wav.stem}.report.json")
                          if args.report else None)
                if args.report:
                    Path(args.report).mkdir(parents=True, exist_ok=True)
                run(_config_from_args(args, wav, out_dir / wav.name, report))
            return 0
        if args.input is None or args.output is None:
            raise InvalidInputError("input and output paths are required "
                                    "(or use --input-dir/--output-dir)")
        run(_config_from_args(args, args.input, args.output, args.report))
        return 0
    except (FormatError, DataError) as exc:
        print(f"dereverb: format error: {exc}", file=sys.stderr)
        return EXIT_FORMAT
    except NumericalError as exc:
        print(f"dereverb: numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    except (InvalidInputError, ShapeError, DereverbError) as exc:
        print(f"dereverb: configuration error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except OSError as exc:
        print(f"dereverb: I/O failure: {exc}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())

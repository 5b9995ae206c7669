"""Command-line entry point: ``seqaug <subcommand> ...``.

Exit codes: 0 success, 1 I/O or input-format error, 2 invalid config,
3 failed self-test.
"""

from __future__ import annotations

import argparse
import os
import sys
from pathlib import Path

from . import evalsim, stats
from .config import PRESETS, AugmentConfig, load_config
from .core import ConfigError, FormatError
from .io import (ManifestRecord, read_featseq, read_manifest, render_pgm,
                 write_featseq, write_manifest)
from .labelsmooth import read_nbest
from .lenperturb import perturb_features
from .rng import derive_stream
from .schedule import (LENPB, NBESTLS, EpochCounters, ScheduleSpec, apply_epoch, is_active,
                       ordered_map, smooth_step)

EXIT_IO = 1
EXIT_CONFIG = 2
EXIT_SELFTEST = 3


def _epoch(text):
    value = int(text)
    if value < 1:
        raise argparse.ArgumentTypeError("epochs are numbered from 1")
    return value


def _load_config(path) -> AugmentConfig:
    if path in PRESETS:
        return PRESETS[path]
    return load_config(path)


def cmd_perturb(args) -> int:
    cfg = _load_config(args.config)
    manifest = read_manifest(args.manifest)
    out_dir = Path(args.out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    spec = ScheduleSpec(lenpb=cfg.schedule.lenpb)
    counters = EpochCounters()
    records = []
    stream = apply_epoch(manifest.utterances(), args.epoch, cfg.lenpb, cfg.smoothing, None,
                         spec, args.seed, args.threads, counters)
    for u in stream:
        name = f"{u.id}.fseq"
        write_featseq(u.features, out_dir / name)
        records.append(ManifestRecord(u.id, name, u.labels))
    write_manifest(records, out_dir / "manifest.tsv")
    print(f"utterances={counters.total} drop_gates={counters.drop_gates} "
          f"insert_gates={counters.insert_gates} "
          f"active={int(is_active(LENPB, args.epoch, spec))}")
    return 0


def cmd_smooth(args) -> int:
    cfg = _load_config(args.config)
    manifest = read_manifest(args.manifest)
    nbest = read_nbest(args.nbest)
    active = is_active(NBESTLS, args.epoch, cfg.schedule)
    out_path = Path(args.out)
    out_dir = out_path.resolve().parent
    out_dir.mkdir(parents=True, exist_ok=True)

    def work(record: ManifestRecord):
        if not active:
            return record.transcript, "kept"
        rng = derive_stream(args.seed, record.id, args.epoch)
        return smooth_step(record.id, record.transcript, cfg.smoothing, nbest, rng)

    tally = {"replaced": 0, "kept": 0, "missing": 0}
    records = []
    for record, (labels, outcome) in zip(manifest.records,
                                         ordered_map(work, manifest.records, args.threads)):
        tally[outcome] += 1
        path = os.path.relpath(manifest.resolve(record).resolve(), out_dir)
        records.append(ManifestRecord(record.id, path, labels))
    write_manifest(records, out_path)
    print(f"replaced={tally['replaced']} kept={tally['kept']} missing_nbest={tally['missing']}")
    return 0


def cmd_render(args) -> int:
    seq = read_featseq(args.input)
    if args.config:
        cfg = _load_config(args.config)
        seq, _ = perturb_features(seq, cfg.lenpb, derive_stream(args.seed, args.utt_id, args.epoch))
    render_pgm(seq, args.output)
    return 0


def cmd_stats(args) -> int:
    before = read_manifest(args.before)
    after = read_manifest(args.after)
    report = stats.length_report(before.utterances(), after.utterances())
    sys.stdout.write(report.to_text())
    return 0


def cmd_simulate(args) -> int:
    results = evalsim.simulate(args.seeds, epochs=args.epochs)
    sys.stdout.write(evalsim.format_results(results))
    return 0


def cmd_selftest(args) -> int:
    if args.config:
        cfg = _load_config(args.config)
        lp, sm = cfg.lenpb, cfg.smoothing
    else:
        lp = PRESETS["swb-lenpb-only"].lenpb
        sm = PRESETS["swb-nbestls-only"].smoothing
    result = stats.verify_rates(args.trials, lp, sm, args.seed, args.threads)
    sys.stdout.write(result.to_text())
    return 0 if result.passed else EXIT_SELFTEST


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="seqaug", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, needs_config=True):
        p.add_argument("--config", required=needs_config,
                       help="config file, or a preset name")
        p.add_argument("--epoch", type=_epoch, default=1)
        p.add_argument("--seed", type=int, default=0)
        p.add_argument("--threads", type=int, default=1)

    p = sub.add_parser("perturb", help="length-perturb every utterance of a manifest")
    p.add_argument("--manifest", required=True)
    p.add_argument("--out-dir", required=True)
    common(p)
    p.set_defaults(func=cmd_perturb)

    p = sub.add_parser("smooth", help="n-best label smoothing over a manifest")
    p.add_argument("--manifest", required=True)
    p.add_argument("--nbest", required=True)
    p.add_argument("--out", required=True)
    common(p)
    p.set_defaults(func=cmd_smooth)

    p = sub.add_parser("render", help="write a feature file as a PGM image")
    p.add_argument("--in", dest="input", required=True)
    p.add_argument("--out", dest="output", required=True)
    p.add_argument("--config", help="perturb before rendering with this config's lenpb fields")
    p.add_argument("--utt-id", default="render")
    p.add_argument("--epoch", type=_epoch, default=1)
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=cmd_render)

    p = sub.add_parser("stats", help="length-change report between two manifests")
    p.add_argument("--before", required=True)
    p.add_argument("--after", required=True)
    p.set_defaults(func=cmd_stats)

    p = sub.add_parser("simulate", help="length-mismatch toy experiment")
    p.add_argument("--seeds", type=int, default=10)
    p.add_argument("--epochs", type=int, default=300)
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("selftest", help="check gate and replacement rates")
    p.add_argument("--trials", type=int, default=20000)
    common(p, needs_config=False)
    p.set_defaults(func=cmd_selftest)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except ConfigError as exc:
        print(f"seqaug: config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except (FormatError, OSError, ValueError) as exc:
        print(f"seqaug: error: {exc}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())

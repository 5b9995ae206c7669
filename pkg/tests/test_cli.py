import filecmp
import subprocess
import sys
from pathlib import Path

import numpy as np
import pytest

from sample_nbest import HYPOTHESES, TRUTH, nbest_block
from seqaug.cli import main
from seqaug.core import FeatureSequence
from seqaug.io import read_featseq, read_manifest, write_featseq


def make_corpus(root: Path, n=30, seed=0, nbest_every=1, truth=TRUTH):
    gen = np.random.default_rng(seed)
    feats = root / "feats"
    feats.mkdir(parents=True)
    lines, nb = [], []
    for i in range(n):
        utt = f"utt{i:04d}"
        frames = gen.standard_normal((int(gen.integers(20, 60)), 4)).astype(np.float32)
        write_featseq(FeatureSequence(frames), feats / f"{utt}.fseq")
        lines.append(f"{utt}\tfeats/{utt}.fseq\t{truth}\n")
        if i % nbest_every == 0:
            nb.append(nbest_block(utt))
    (root / "manifest.tsv").write_text("".join(lines))
    (root / "nbest.tsv").write_text("".join(nb))
    return root / "manifest.tsv", root / "nbest.tsv"


def trees_equal(a: Path, b: Path) -> bool:
    cmp = filecmp.dircmp(a, b)
    if cmp.left_only or cmp.right_only:
        return False
    _, mismatch, errors = filecmp.cmpfiles(a, b, cmp.common_files, shallow=False)
    return not mismatch and not errors


def test_perturb_writes_tree(tmp_path, capsys):
    manifest, _ = make_corpus(tmp_path / "in")
    out = tmp_path / "out"
    code = main(["perturb", "--manifest", str(manifest), "--out-dir", str(out),
                 "--config", "swb-lenpb-only", "--epoch", "3", "--seed", "1"])
    assert code == 0
    m = read_manifest(out / "manifest.tsv")
    assert len(m) == 30
    assert all(r.transcript == tuple(TRUTH.split()) for r in m)
    lengths = [u.features.num_frames for u in m.utterances()]
    originals = [u.features.num_frames for u in read_manifest(manifest).utterances()]
    assert lengths != originals
    assert capsys.readouterr().out.startswith("utterances=30 ")


def test_lifted_epoch_is_bit_identical(tmp_path):
    manifest, _ = make_corpus(tmp_path / "in")
    out = tmp_path / "out"
    assert main(["perturb", "--manifest", str(manifest), "--out-dir", str(out),
                 "--config", "swb-lenpb-only", "--epoch", "26"]) == 0
    for i in range(30):
        name = f"utt{i:04d}.fseq"
        assert (out / name).read_bytes() == (tmp_path / "in" / "feats" / name).read_bytes()


def test_repeat_and_thread_count_give_identical_trees(tmp_path):
    manifest, nbest = make_corpus(tmp_path / "in", n=60)
    runs = {}
    for label, threads in [("a", 1), ("b", 1), ("c", 8)]:
        out = tmp_path / label
        assert main(["perturb", "--manifest", str(manifest), "--out-dir", str(out / "p"),
                     "--config", "swb-combo", "--epoch", "20", "--seed", "5",
                     "--threads", str(threads)]) == 0
        assert main(["smooth", "--manifest", str(manifest), "--nbest", str(nbest),
                     "--out", str(out / "s" / "manifest.tsv"), "--config", "swb-combo",
                     "--epoch", "2", "--seed", "5", "--threads", str(threads)]) == 0
        runs[label] = out
    for sub in ("p", "s"):
        assert trees_equal(runs["a"] / sub, runs["b"] / sub)
        assert trees_equal(runs["a"] / sub, runs["c"] / sub)


def test_smooth_summary_and_missing(tmp_path, capsys):
    manifest, nbest = make_corpus(tmp_path / "in", n=40, nbest_every=4)
    cfg = tmp_path / "always.conf"
    cfg.write_text("epsilon = 1\nK = 20\nnbestls_epochs = 1-15\n")
    out = tmp_path / "o" / "m.tsv"
    assert main(["smooth", "--manifest", str(manifest), "--nbest", str(nbest), "--out", str(out),
                 "--config", str(cfg)]) == 0
    assert capsys.readouterr().out.strip() == "replaced=10 kept=0 missing_nbest=30"
    m = read_manifest(out)
    texts = [" ".join(r.transcript) for r in m]
    assert sum(t in HYPOTHESES for t in texts) == 10
    assert sum(t == TRUTH for t in texts) == 30
    # feature paths still resolve from the new location
    assert m.load(m.records[0]).features.num_frames > 0


def test_smooth_epsilon_zero(tmp_path, capsys):
    manifest, nbest = make_corpus(tmp_path / "in", n=20)
    cfg = tmp_path / "c.conf"
    cfg.write_text("epsilon = 0\nK = 20\nnbestls_epochs = 1-1\n")
    assert main(["smooth", "--manifest", str(manifest), "--nbest", str(nbest),
                 "--out", str(tmp_path / "m.tsv"), "--config", str(cfg)]) == 0
    assert capsys.readouterr().out.startswith("replaced=0 kept=20")


def test_render_and_stats(tmp_path, capsys):
    manifest, _ = make_corpus(tmp_path / "in", n=5)
    src = tmp_path / "in" / "feats" / "utt0000.fseq"
    assert main(["render", "--in", str(src), "--out", str(tmp_path / "a.pgm")]) == 0
    t = read_featseq(src).num_frames
    assert (tmp_path / "a.pgm").read_bytes().startswith(f"P5\n{t} 4\n255\n".encode())
    assert main(["render", "--in", str(src), "--out", str(tmp_path / "b.pgm"),
                 "--config", "swb-lenpb-only", "--seed", "2"]) == 0
    assert main(["stats", "--before", str(manifest), "--after", str(manifest)]) == 0
    out = capsys.readouterr().out
    assert "count=5\nmean_delta=0.000000\n" in out and "hist=0:5" in out


def test_exit_codes(tmp_path, capsys):
    manifest, _ = make_corpus(tmp_path / "in", n=3)
    bad_cfg = tmp_path / "bad.conf"
    bad_cfg.write_text("p_s = 2\n")
    base = ["perturb", "--manifest", str(manifest), "--out-dir", str(tmp_path / "o")]
    assert main(base + ["--config", str(bad_cfg)]) == 2
    assert main(base + ["--config", "no-such-preset"]) == 1
    bad_manifest = tmp_path / "bad.tsv"
    bad_manifest.write_text("only-one-field\n")
    assert main(["perturb", "--manifest", str(bad_manifest), "--out-dir", str(tmp_path / "o"),
                 "--config", "swb-lenpb-only"]) == 1
    err = capsys.readouterr().err
    assert "config error" in err and "line 1" in err
    corrupt = tmp_path / "in" / "feats" / "utt0001.fseq"
    corrupt.write_bytes(b"FSEQ1\0")
    assert main(base + ["--config", "swb-lenpb-only"]) == 1
    assert main(["stats", "--before", str(manifest), "--after", str(tmp_path / "nope.tsv")]) == 1


def test_selftest_passes_on_defaults(capsys):
    assert main(["selftest", "--trials", "20000"]) == 0
    assert "all_pass=1" in capsys.readouterr().out


def test_selftest_fails_on_band_violation(tmp_path, capsys, monkeypatch):
    from seqaug import stats

    real = stats.verify_rates

    def skewed(*args, **kwargs):
        v = real(*args, **kwargs)
        c = v.checks[0]
        v.checks[0] = c.__class__(c.name, c.expected, c.expected + 10 * c.band, c.band)
        return v

    monkeypatch.setattr(stats, "verify_rates", skewed)
    assert main(["selftest", "--trials", "2000"]) == 3
    assert "all_pass=0" in capsys.readouterr().out


def test_simulate_output(capsys):
    assert main(["simulate", "--seeds", "2", "--epochs", "30"]) == 0
    lines = capsys.readouterr().out.splitlines()
    assert [line.split("=")[0] for line in lines] == [
        "seed0_baseline", "seed0_augmented", "seed1_baseline", "seed1_augmented", "seeds", "wins"]


def test_module_entry_point(tmp_path):
    proc = subprocess.run([sys.executable, "-m", "seqaug", "selftest", "--trials", "500"],
                          capture_output=True, text=True)
    assert proc.returncode == 0, proc.stderr
    assert proc.stdout.startswith("n_trials=500\n")

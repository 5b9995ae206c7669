"""Time the hot paths under the numba backend and the pure-numpy fallback.

Each backend runs in its own interpreter because the switch is read at
import time::

    python benchmarks/bench_kernels.py [--repeat 5]
"""

import argparse
import json
import os
import subprocess
import sys
import timeit

CASES = {
    "derive_stream": (
        "from seqaug.rng import derive_stream",
        "derive_stream(7, 'sw02001-A_000098', 3)",
        20_000),
    "perturb_features T=500": (
        "import numpy as np\n"
        "from seqaug.core import FeatureSequence, LengthPerturbConfig\n"
        "from seqaug.lenperturb import perturb_features\n"
        "from seqaug.rng import RandomStream\n"
        "seq = FeatureSequence(np.ones((500, 40), dtype=np.float32))\n"
        "cfg = LengthPerturbConfig(1, 0.1, 7, 1, 0.1, 3)\n"
        "r = RandomStream(1)",
        "perturb_features(seq, cfg, r)",
        2_000),
    "drop_length_samples 10^5": (
        "from seqaug.lenperturb import drop_length_samples\n"
        "from seqaug.rng import RandomStream\n"
        "r = RandomStream(1)",
        "drop_length_samples(8, 0.25, 2, 100_000, r)",
        5),
    "insert_length_samples 10^4": (
        "from seqaug.lenperturb import insert_length_samples\n"
        "from seqaug.rng import RandomStream\n"
        "r = RandomStream(1)",
        "insert_length_samples(100, 0.1, 3, 10_000, r)",
        5),
}


def measure(repeat):
    from seqaug._accel import backend_name

    out = {"backend": backend_name(), "cases": {}}
    for name, (setup, stmt, number) in CASES.items():
        timeit.timeit(stmt, setup, number=1)  # compile / warm caches
        best = min(timeit.repeat(stmt, setup, number=number, repeat=repeat))
        out["cases"][name] = best / number
    return out


def child(disable, repeat):
    env = dict(os.environ)
    env["SEQAUG_DISABLE_NUMBA"] = "1" if disable else "0"
    proc = subprocess.run([sys.executable, __file__, "--child", "--repeat", str(repeat)],
                          env=env, capture_output=True, text=True, check=True)
    return json.loads(proc.stdout)


def fmt(seconds):
    for unit, scale in (("s", 1), ("ms", 1e-3), ("us", 1e-6)):
        if seconds >= scale:
            return f"{seconds / scale:8.2f} {unit}"
    return f"{seconds / 1e-9:8.2f} ns"


def main():
    parser = argparse.ArgumentParser()
    parser.add_argument("--repeat", type=int, default=5)
    parser.add_argument("--child", action="store_true", help=argparse.SUPPRESS)
    args = parser.parse_args()
    if args.child:
        print(json.dumps(measure(args.repeat)))
        return
    fast = child(False, args.repeat)
    slow = child(True, args.repeat)
    print(f"{'case':28} {fast['backend']:>11} {slow['backend']:>11}  speedup")
    for name in CASES:
        a, b = fast["cases"][name], slow["cases"][name]
        print(f"{name:28} {fmt(a)} {fmt(b)}  {b / a:6.1f}x")


if __name__ == "__main__":
    main()

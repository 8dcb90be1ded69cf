"""Time the float64 kernels under both backends.

Each backend runs in its own interpreter because the choice is fixed at
import time by ``PADENOISE_NUMBA``::

    python benchmarks/bench_kernels.py --sizes 40 80 160 --repeat 20
"""

from __future__ import annotations

import argparse
import json
import os
import subprocess
import sys

WORKER = r"""
import json, sys, time
import numpy as np
from padenoise import _kernels as K

sizes, repeat = json.loads(sys.argv[1]), int(sys.argv[2])
rng = np.random.default_rng(7)
out = {"backend": K.backend(), "rows": []}
for n in sizes:
    z = np.exp(2j * np.pi * np.arange(n) / n) * (1 + 0.01 * rng.standard_normal(n))
    coeffs = np.poly(z)[::-1].astype(np.complex128)
    z0 = 1.1 * np.exp(2j * np.pi * (np.arange(n) + 0.3) / n)
    K.pair_log_sum(z); K.aberth(coeffs, z0, 200)  # warm-up / compile
    t = time.perf_counter()
    for _ in range(repeat):
        K.pair_log_sum(z)
    t_pair = (time.perf_counter() - t) / repeat
    t = time.perf_counter()
    for _ in range(repeat):
        K.aberth(coeffs, z0, 200)
    t_ab = (time.perf_counter() - t) / repeat
    out["rows"].append({"n": n, "pair_log_sum": t_pair, "aberth": t_ab})
print(json.dumps(out))
"""


def run_backend(flag: str, sizes, repeat: int) -> dict:
    env = dict(os.environ, PADENOISE_NUMBA=flag)
    res = subprocess.run([sys.executable, "-c", WORKER, json.dumps(sizes), str(repeat)],
                         env=env, capture_output=True, text=True, check=True)
    return json.loads(res.stdout.strip().splitlines()[-1])


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--sizes", type=int, nargs="+", default=[40, 80, 160])
    ap.add_argument("--repeat", type=int, default=20)
    args = ap.parse_args(argv)
    numba_res = run_backend("1", args.sizes, args.repeat)
    numpy_res = run_backend("0", args.sizes, args.repeat)
    print(f"{'n':>5} {'kernel':>13} {numba_res['backend']:>12} {numpy_res['backend']:>12} {'speedup':>8}")
    for a, b in zip(numba_res["rows"], numpy_res["rows"]):
        for k in ("pair_log_sum", "aberth"):
            print(f"{a['n']:>5} {k:>13} {a[k] * 1e3:>10.3f}ms {b[k] * 1e3:>10.3f}ms {b[k] / a[k]:>7.1f}x")
    return 0


if __name__ == "__main__":
    sys.exit(main())

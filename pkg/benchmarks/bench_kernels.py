"""Time the hot kernels under numba and under the pure-numpy fallback.

    python benchmarks/bench_kernels.py [--repeat 3]

Each backend runs in its own interpreter (the backend is fixed at import
time by RAUZY_DISABLE_NUMBA), results are compared for equality and the
best wall time of each workload is tabulated.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import os
import subprocess
import sys
import time

WORKLOADS = ["arf_sums n=18", "arf_sums n=22", "batch_abar n=8", "batch_cycle n=9",
             "arc_walk n=200 x2000", "orbit_components n=9"]


def _digest(obj) -> str:
    import numpy as np
    if isinstance(obj, tuple):
        return hashlib.sha1("|".join(_digest(x) for x in obj).encode()).hexdigest()[:12]
    if isinstance(obj, np.ndarray):
        return hashlib.sha1(np.ascontiguousarray(obj).tobytes()).hexdigest()[:12]
    return hashlib.sha1(repr(obj).encode()).hexdigest()[:12]


def _jobs():
    import numpy as np
    from rauzy import _kernels as K

    rng = np.random.default_rng(7)
    big = [rng.permutation(np.arange(1, 201)) for _ in range(2000)]
    p18 = rng.permutation(np.arange(1, 19))
    p22 = rng.permutation(np.arange(1, 23))
    p8 = K.all_permutations(8)
    p8 = p8[K.irreducible_mask(p8)]
    p9 = K.all_permutations(9)
    p9 = p9[K.irreducible_mask(p9)]
    return {
        "arf_sums n=18": lambda: K.arf_sums(p18),
        "arf_sums n=22": lambda: K.arf_sums(p22),
        "batch_abar n=8": lambda: K.batch_abar(p8),
        "batch_cycle n=9": lambda: K.batch_cycle_invariants(p9),
        "arc_walk n=200 x2000": lambda: tuple(repr(K.arc_walk(s)) for s in big),
        "orbit_components n=9": lambda: K.orbit_components(9)[2],
    }


def worker(repeat: int) -> None:
    from rauzy import _kernels as K

    out = {"backend": K.backend(), "results": {}}
    for name, fn in _jobs().items():
        value = fn()  # warm-up, also pays numba compilation
        best = float("inf")
        for _ in range(repeat):
            t0 = time.perf_counter()
            fn()
            best = min(best, time.perf_counter() - t0)
        out["results"][name] = {"seconds": best, "digest": _digest(value)}
    print(json.dumps(out))


def run(disable: bool, repeat: int) -> dict:
    env = dict(os.environ, RAUZY_DISABLE_NUMBA="1" if disable else "0")
    proc = subprocess.run([sys.executable, __file__, "--worker", "--repeat", str(repeat)],
                          env=env, capture_output=True, text=True, check=True)
    return json.loads(proc.stdout.strip().splitlines()[-1])


def main() -> int:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=3)
    ap.add_argument("--worker", action="store_true", help=argparse.SUPPRESS)
    args = ap.parse_args()
    if args.worker:
        worker(args.repeat)
        return 0
    fast = run(False, args.repeat)
    slow = run(True, args.repeat)
    print(f"{'workload':<24}{fast['backend']:>12}{slow['backend']:>12}{'speedup':>10}  same")
    agree = True
    for name in WORKLOADS:
        a, b = fast["results"][name], slow["results"][name]
        same = a["digest"] == b["digest"]
        agree &= same
        print(f"{name:<24}{a['seconds']:>11.4f}s{b['seconds']:>11.4f}s"
              f"{b['seconds'] / max(a['seconds'], 1e-9):>9.1f}x  {'yes' if same else 'NO'}")
    return 0 if agree else 1


if __name__ == "__main__":
    sys.exit(main())

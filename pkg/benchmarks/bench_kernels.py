"""Compare the compiled kernels against the pure-Python fallback.

Each mode runs in its own interpreter because the backend is fixed at import
time.  Usage::

    python benchmarks/bench_kernels.py [--repeat N] [--json]
"""
from __future__ import annotations

import argparse
import json
import os
import subprocess
import sys

WORKLOADS = {
    "cp3_search": "cp3 over all 4913 witness tuples of length <= 2, radius 3",
    "closures": "is_consistent on 300 random systems with r <= 6",
    "setgraph": "set graphs plus claims 1 and 2 for every connected prime set of size <= 5",
    "completeness": "completeness check at depth 5 on 10 random systems",
}

_CHILD = r"""
import json, random, sys, time
from setcong import _accel
from setcong.deduction import completeness_check
from setcong.finite import connected_sets, is_prime, search_family, witness_tuples
from setcong.setgraph import build_setgraph, check_claim1, check_claim2
from setcong.systems import CongruenceSystem, Statement, is_consistent, make_cp

def rand_sys(rng, max_r, proper):
    r = rng.randint(2, max_r)
    lo, hi = (1, r - 1) if proper else (1, r)
    side = lambda: frozenset(rng.sample(range(1, r + 1), rng.randint(lo, hi)))
    kinds = ["congruence", "subcongruence"]
    return CongruenceSystem(r, tuple(Statement(rng.choice(kinds), side(), side()) for _ in range(rng.randint(1, 3))))

def cp3_search():
    cp3 = make_cp(3)
    for wt in witness_tuples(2, 2, 3):
        search_family(cp3, wt, 3, m=2)

def closures():
    rng = random.Random(1)
    for _ in range(300):
        is_consistent(rand_sys(rng, 6, False))

def setgraph():
    for P in connected_sets(2, 5):
        if is_prime(P, 2):
            g = build_setgraph(P)
            check_claim1(g)
            check_claim2(g)

def completeness():
    rng = random.Random(2)
    for _ in range(10):
        completeness_check(rand_sys(rng, 4, True), 5)

repeat = int(sys.argv[1])
out = {"backend": _accel.backend()}
for name in %s:
    fn = globals()[name]
    t = time.perf_counter(); fn(); first = time.perf_counter() - t
    best = first
    for _ in range(repeat - 1):
        t = time.perf_counter(); fn(); best = min(best, time.perf_counter() - t)
    out[name] = {"first": first, "best": best}
print(json.dumps(out))
""" % (list(WORKLOADS),)


def run_mode(disable: bool, repeat: int) -> dict:
    env = dict(os.environ, SETCONG_DISABLE_NUMBA="1" if disable else "0")
    proc = subprocess.run(
        [sys.executable, "-c", _CHILD, str(repeat)], env=env, capture_output=True, text=True, check=True
    )
    return json.loads(proc.stdout.strip().splitlines()[-1])


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=3)
    ap.add_argument("--json", action="store_true")
    args = ap.parse_args()
    fast = run_mode(False, args.repeat)
    slow = run_mode(True, args.repeat)
    if args.json:
        print(json.dumps({"numba": fast, "python": slow}, indent=2))
        return
    print(f"{'workload':14} {fast['backend']:>16} {'python':>10} {'speedup':>8}")
    for name, desc in WORKLOADS.items():
        a, b = fast[name]["best"], slow[name]["best"]
        print(f"{name:14} {a:15.3f}s {b:9.3f}s {b / a:7.1f}x   {desc}")
    print("(best of", args.repeat, "runs; the first compiled run includes cache loading)")


if __name__ == "__main__":
    main()

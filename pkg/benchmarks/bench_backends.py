"""Compare the compiled core against the pure-Python fallback.

Each backend runs in its own interpreter (the choice is made at import time):

    python3 benchmarks/bench_backends.py [--repeat N]
"""

import argparse
import json
import os
import subprocess
import sys

WORKLOAD = r"""
import json, random, sys, timeit
from g2para import BACKEND, Vector, classify, f_tensor, induce, levi_civita, load_problem
from g2para.scalar import QuadExt

repeat = int(sys.argv[1])
spec = load_problem(None)
b = spec.bundle("normalized")
c = levi_civita(spec.lie_algebra(), b.g)
s = induce(b, Vector.basis(2))
rng = random.Random(0)
xs = [QuadExt(rng.randint(-9, 9), rng.randint(-9, 9), rng.randint(1, 9)) for _ in range(200)]

def arith():
    acc = QuadExt(0, 0, 1)
    for x, y in zip(xs, xs[1:]):
        acc = acc + x * y - y
        if y:
            acc = acc + x / y

def best(fn, number):
    return min(timeit.repeat(fn, number=number, repeat=repeat)) / number

out = {
    "backend": BACKEND,
    "quadext_arith": best(arith, 20),
    "levi_civita": best(lambda: levi_civita(spec.lie_algebra(), b.g), 5),
    "f_tensor": best(lambda: f_tensor(s, c), 5),
    "classify": best(lambda: classify(s, c, F=f_tensor(s, c)), 2),
}
print(json.dumps(out))
"""


def measure(pure, repeat):
    env = dict(os.environ)
    env.pop("G2PARA_PURE_PYTHON", None)
    if pure:
        env["G2PARA_PURE_PYTHON"] = "1"
    res = subprocess.run([sys.executable, "-c", WORKLOAD, str(repeat)], env=env,
                         capture_output=True, text=True, check=True)
    return json.loads(res.stdout)


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args()
    fast = measure(False, args.repeat)
    pure = measure(True, args.repeat)
    if fast["backend"] != "cython":
        print("compiled core not available; both runs used the pure-Python backend")
    print(f"{'workload':16s} {fast['backend']:>12s} {'python':>12s} {'speedup':>8s}")
    for key in ("quadext_arith", "levi_civita", "f_tensor", "classify"):
        f, p = fast[key], pure[key]
        print(f"{key:16s} {f * 1e3:10.2f}ms {p * 1e3:10.2f}ms {p / f:7.2f}x")


if __name__ == "__main__":
    main()

import json
import os
import random
import subprocess
import sys
from fractions import Fraction

import pytest

import g2para
from g2para import _kernels_py as kpy

try:
    from g2para import _ccore
except ImportError:  # pragma: no cover
    _ccore = None

needs_core = pytest.mark.skipif(_ccore is None, reason="compiled core not built")

# computes a fingerprint of the example under whichever backend is active
SCRIPT = """
import json
from g2para import BACKEND, Vector, classify, f_tensor, induce, levi_civita, load_problem
spec = load_problem(None)
out = {"backend": BACKEND}
for mode, xi in (("literal", spec.xi_vector()), ("normalized", Vector.basis(2))):
    b = spec.bundle(mode)
    c = levi_civita(spec.lie_algebra(), b.g)
    s = induce(b, xi)
    F = f_tensor(s, c)
    out[mode] = {"F": [str(x) for x in F.values], "classes": sorted(classify(s, c, F=F).present)}
print(json.dumps(out))
"""


def fingerprint(pure):
    env = dict(os.environ)
    env.pop("G2PARA_PURE_PYTHON", None)
    if pure:
        env["G2PARA_PURE_PYTHON"] = "1"
    out = subprocess.run([sys.executable, "-c", SCRIPT], env=env, capture_output=True, text=True, check=True)
    return json.loads(out.stdout)


def test_env_forces_python():
    assert fingerprint(True)["backend"] == "python"


@needs_core
def test_backends_agree():
    fast, pure = fingerprint(False), fingerprint(True)
    assert fast["backend"] == "cython"
    assert fast["literal"] == pure["literal"]
    assert fast["normalized"] == pure["normalized"]


@needs_core
@pytest.mark.parametrize("name", ["matvec", "matmul", "bilinear", "eval3"])
def test_kernels_agree(name):
    rng = random.Random(name)
    M = [Fraction(rng.randint(-5, 5), rng.randint(1, 4)) for _ in range(49)]
    N = [Fraction(rng.randint(-5, 5), rng.randint(1, 4)) for _ in range(49)]
    T = [Fraction(rng.randint(-3, 3)) for _ in range(343)]
    v, w, u = ([Fraction(rng.randint(-4, 4)) for _ in range(7)] for _ in range(3))
    args = {"matvec": (M, v), "matmul": (M, N), "bilinear": (M, v, w), "eval3": (T, v, w, u)}[name]
    fast, pure = getattr(_ccore, name)(*args), getattr(kpy, name)(*args)
    if isinstance(pure, list):
        fast, pure = list(fast), list(pure)
    assert fast == pure


def test_version():
    assert g2para.__version__ == "0.1.0"

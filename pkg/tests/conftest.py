import pytest

from g2para._qext_py import QuadExt as PyQuadExt
from g2para.apcms import induce
from g2para.exterior import Vector
from g2para.g2star import G2Bundle
from g2para.liealg import levi_civita
from g2para.problem import load_problem
from g2para.scalar import parse_scalar

try:
    from g2para._ccore import QuadExt as CQuadExt
except ImportError:  # pragma: no cover - compiled core not built
    CQuadExt = None

QUADEXT_IMPLS = [pytest.param(PyQuadExt, id="python")]
if CQuadExt is not None:
    QUADEXT_IMPLS.append(pytest.param(CQuadExt, id="cython"))


@pytest.fixture(params=QUADEXT_IMPLS)
def Q(request):
    """Each QuadExt implementation in turn."""
    return request.param


@pytest.fixture(scope="session")
def sec4():
    return load_problem(None)


@pytest.fixture(scope="session")
def sec4_literal(sec4):
    b = sec4.bundle("literal")
    return sec4.lie_algebra(), b, levi_civita(sec4.lie_algebra(), b.g)


@pytest.fixture(scope="session")
def sec4_normalized(sec4):
    b = sec4.bundle("normalized")
    return sec4.lie_algebra(), b, levi_civita(sec4.lie_algebra(), b.g)


@pytest.fixture(scope="session")
def xi_literal():
    """(1/sqrt 2) f2."""
    return Vector([0, parse_scalar("1/2*sqrt(2)"), 0, 0, 0, 0, 0])


@pytest.fixture(scope="session")
def s_literal(sec4_literal, xi_literal):
    _, b, c = sec4_literal
    return induce(b, xi_literal), c


@pytest.fixture(scope="session")
def s_normalized(sec4_normalized):
    _, b, c = sec4_normalized
    return induce(b, Vector.basis(2)), c


@pytest.fixture(scope="session")
def standard():
    return G2Bundle.standard()


def pytest_terminal_summary(terminalreporter):
    mod = __import__("sys").modules.get("test_acceptance")
    results = getattr(mod, "RESULTS", None)
    if not results:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(results):
        status, title, why = results[n]
        terminalreporter.write_line(f"criterion {n}: {status}  {title}" + (f"  [{why}]" if why else ""))

"""Split G2 3-forms: induced metric and volume, calibration, and the cross product."""

from __future__ import annotations

import math
from fractions import Fraction

from .errors import NotG2StarFormError, UnrepresentableCalibrationError
from .exterior import DIM, KForm, Metric, Vector, _det, form_to_tensor3, interior, wedge
from .scalar import div, exact, is_zero, nth_root_exact

__all__ = [
    "G2Bundle",
    "TOP",
    "calibrate",
    "cross_product",
    "example_phi",
    "gram",
    "gram_matrix",
    "metric_from_vol",
    "standard_phi",
]

TOP = tuple(range(1, DIM + 1))
MODES = ("literal", "normalized")


def standard_phi() -> KForm:
    """-e^127 - e^135 + e^146 + e^236 + e^245 - e^347 + e^567."""
    return KForm(3, {
        (1, 2, 7): -1, (1, 3, 5): -1, (1, 4, 6): 1, (2, 3, 6): 1,
        (2, 4, 5): 1, (3, 4, 7): -1, (5, 6, 7): 1,
    })


def example_phi() -> KForm:
    """-f^156 - f^236 + f^245 - 1/2 f^127 - f^347 on the seven-dimensional solvable example."""
    return KForm(3, {
        (1, 5, 6): -1, (2, 3, 6): -1, (2, 4, 5): 1,
        (1, 2, 7): Fraction(-1, 2), (3, 4, 7): -1,
    })


def gram(phi: KForm):
    """B[i][j] = (f_i _| phi) ^ (f_j _| phi) ^ phi as 7-forms (0-based table)."""
    if phi.degree != 3:
        raise ValueError("gram needs a 3-form")
    contr = [interior(Vector.basis(i), phi) for i in range(1, DIM + 1)]
    table = [[None] * DIM for _ in range(DIM)]
    for i in range(DIM):
        ci_phi = wedge(contr[i], phi)
        for j in range(i, DIM):
            # 2-forms commute, so (a^b)^phi = b^(a^phi)
            table[i][j] = table[j][i] = wedge(contr[j], ci_phi)
    return table


def gram_matrix(phi: KForm):
    """Flat 7x7 list of the f^{1234567} coefficients of :func:`gram`."""
    return [entry.terms.get(TOP, 0) for row in gram(phi) for entry in row]


def _vol_coefficient(vol) -> object:
    if isinstance(vol, KForm):
        if vol.degree != DIM:
            raise ValueError("volume must be a 7-form")
        return vol.terms.get(TOP, 0)
    return vol


def metric_from_vol(phi: KForm, vol) -> Metric:
    """g(f_i, f_j) = B[i][j] / (6 vol), the ratio of top-degree coefficients."""
    c = _vol_coefficient(vol)
    if is_zero(c):
        raise ValueError("volume form is zero")
    six_c = 6 * c
    return Metric([div(b, six_c) if b else 0 for b in gram_matrix(phi)])


def _ninth_root(x, allow_float: bool):
    if isinstance(x, float):
        return math.copysign(abs(x) ** (1.0 / 9.0), x)
    r = nth_root_exact(exact(x), 9)
    if r is not None:
        return r
    if allow_float:
        xf = float(x)
        return math.copysign(abs(xf) ** (1.0 / 9.0), xf)
    raise UnrepresentableCalibrationError(f"c^9 = {x} has no ninth root in the scalar field")


def calibrate(phi: KForm, orientation: int = 1, allow_float: bool = False):
    """Normalised (metric, volume) induced by ``phi``.

    With g = B / (6c) and the requirement that the metric volume of g equal
    |c|, one gets |det B| = 6^7 |c|^9.  Signature (4,3) needs det g > 0, so
    the sign of c is the sign of det B; ``orientation`` must agree with it.
    """
    if orientation not in (1, -1):
        raise ValueError("orientation must be +1 or -1")
    if phi.degree != 3 or phi.is_zero():
        raise NotG2StarFormError("zero or non-3-form input")
    B = gram_matrix(phi)
    detB = _det(B)
    if is_zero(detB):
        raise NotG2StarFormError("degenerate gram matrix")
    sign = 1 if detB > 0 else -1
    if sign != orientation:
        raise NotG2StarFormError(
            f"orientation {orientation:+d} gives signature (3,4); this form needs orientation {sign:+d}")
    c = _ninth_root(div(detB, 6 ** 7), allow_float)
    g = Metric([div(b, 6 * c) if b else 0 for b in B])
    if g.signature() != (4, 3):
        raise NotG2StarFormError(f"induced metric has signature {g.signature()}, not (4,3)")
    return g, KForm(DIM, {TOP: c})


def cross_product_table(phi: KForm, g: Metric):
    """P[i][j] = raise(g, phi(f_i, f_j, .)) for all basis pairs (0-based)."""
    T = form_to_tensor3(phi)
    g.inverse()
    table = []
    for i in range(DIM):
        row = []
        for j in range(DIM):
            cov = T[i * 49 + j * 7: i * 49 + j * 7 + 7]
            row.append(g.raise_(cov) if any(cov) else Vector.zero())
        table.append(tuple(row))
    return tuple(table)


class G2Bundle:
    """A 3-form with its metric, volume and cross product."""

    __slots__ = ("phi", "g", "vol", "P", "mode", "_T")

    def __init__(self, phi: KForm, g: Metric, vol: KForm | None = None, mode: str = "literal"):
        if mode not in MODES:
            raise ValueError(f"mode must be one of {MODES}")
        self.phi = phi
        self.g = g
        self.vol = vol
        self.mode = mode
        self.P = cross_product_table(phi, g)
        self._T = form_to_tensor3(phi)

    @classmethod
    def literal(cls, phi: KForm, vol=None, metric: Metric | None = None):
        """Use the given metric (or B/(6 vol)) verbatim, without renormalising."""
        if metric is None:
            if vol is None:
                raise ValueError("literal mode needs a volume or a metric")
            metric = metric_from_vol(phi, vol)
        if vol is not None and not isinstance(vol, KForm):
            vol = KForm(DIM, {TOP: vol})
        return cls(phi, metric, vol, "literal")

    @classmethod
    def normalized(cls, phi: KForm, orientation: int = 1, allow_float: bool = False):
        g, vol = calibrate(phi, orientation, allow_float)
        return cls(phi, g, vol, "normalized")

    @classmethod
    def standard(cls):
        return cls(standard_phi(), Metric.standard(), KForm(DIM, {TOP: 1}), "normalized")

    @property
    def phi_tensor(self):
        """Dense flat components phi(f_i, f_j, f_k)."""
        return self._T

    def cross(self, X, Y) -> Vector:
        return cross_product(self, X, Y)

    def nonzero_products(self):
        """``{(i, j): P(f_i, f_j)}`` over nonzero entries with i < j, 1-based."""
        return {(i + 1, j + 1): self.P[i][j] for i in range(DIM) for j in range(i + 1, DIM)
                if not self.P[i][j].is_zero()}

    def __repr__(self):
        return f"G2Bundle(mode={self.mode}, phi={self.phi.render()})"


def cross_product(bundle: G2Bundle, X, Y) -> Vector:
    """P(X, Y), bilinear from the basis table."""
    out = Vector.zero()
    for i in range(DIM):
        if not X[i]:
            continue
        for j in range(DIM):
            if Y[j] and i != j:
                out = out + bundle.P[i][j] * (X[i] * Y[j])
    return out

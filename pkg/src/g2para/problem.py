"""Problem files: one TOML document fixes the Lie algebra, the 3-form, the metric data and xi."""

from __future__ import annotations

from dataclasses import dataclass
from importlib import resources
from pathlib import Path

from .errors import G2ParaError, MalformedScalarError, MixedRadicandError, ValidationError
from .exterior import DIM, KForm, Metric, Vector, _det, parse_symmetric_product
from .g2star import G2Bundle, gram_matrix
from .liealg import LieAlgebra, check_jacobi
from .scalar import format_scalar, is_squarefree, parse_scalar

try:
    import tomllib
except ModuleNotFoundError:  # Python < 3.11
    import tomli as tomllib

__all__ = ["ProblemSpec", "bundled_problem", "emit", "load_problem", "parse_spec", "resolve_path"]

MODES = ("literal", "normalized")


@dataclass(frozen=True)
class ProblemSpec:
    brackets: tuple          # ((i, j, ((k, value), ...)), ...)
    phi: tuple               # ((i, j, k, value), ...)
    vol: object = None       # coefficient of f^{1234567}
    metric: tuple | None = None   # ((i, j, value), ...) with i <= j
    xi: tuple | None = None
    radicand: int = 2
    mode: str = "literal"
    orientation: int | None = None

    def lie_algebra(self) -> LieAlgebra:
        out = {}
        for i, j, comps in self.brackets:
            v = [0] * DIM
            for k, c in comps:
                v[k - 1] = v[k - 1] + c
            out[(i, j)] = Vector(v)
        return LieAlgebra(out)

    def phi_form(self) -> KForm:
        return KForm(3, {(i, j, k): c for i, j, k, c in self.phi})

    def metric_obj(self) -> Metric | None:
        if self.metric is None:
            return None
        return Metric.from_entries({(i, j): c for i, j, c in self.metric})

    def xi_vector(self) -> Vector | None:
        return None if self.xi is None else Vector(self.xi)

    def bundle(self, mode: str | None = None, allow_float: bool = False) -> G2Bundle:
        mode = mode or self.mode
        if mode == "literal":
            if self.vol is None and self.metric is None:
                raise ValidationError("literal mode needs 'vol' or 'metric'", "mode")
            return G2Bundle.literal(self.phi_form(), self.vol, self.metric_obj())
        orientation = self.orientation
        if orientation is None:
            orientation = 1 if _det(gram_matrix(self.phi_form())) > 0 else -1
        return G2Bundle.normalized(self.phi_form(), orientation, allow_float)


def _scalar(text, radicand, where):
    try:
        return parse_scalar(text, radicand)
    except (MalformedScalarError, MixedRadicandError) as exc:
        raise ValidationError(str(exc), where) from None


def _index(x, where):
    if not isinstance(x, int) or isinstance(x, bool) or not 1 <= x <= DIM:
        raise ValidationError(f"index {x!r} outside 1..{DIM}", where)
    return x


def parse_spec(text: str) -> ProblemSpec:
    """Parse and validate a problem document (TOML)."""
    try:
        doc = tomllib.loads(text)
    except tomllib.TOMLDecodeError as exc:
        raise ValidationError(f"not valid TOML: {exc}") from None

    radicand = doc.get("radicand", 2)
    if not isinstance(radicand, int) or not is_squarefree(radicand):
        raise ValidationError(f"radicand must be a squarefree integer >= 2, got {radicand!r}", "radicand")
    mode = doc.get("mode", "literal")
    if mode not in MODES:
        raise ValidationError(f"mode must be one of {MODES}", "mode")
    orientation = doc.get("orientation")
    if orientation not in (None, 1, -1):
        raise ValidationError("orientation must be +1 or -1", "orientation")

    brackets = []
    seen = set()
    for n, entry in enumerate(doc.get("brackets", [])):
        where = f"brackets[{n}]"
        if not isinstance(entry, list) or len(entry) != 3:
            raise ValidationError("expected [i, j, [[k, value], ...]]", where)
        i, j, comps = _index(entry[0], where), _index(entry[1], where), entry[2]
        if i >= j:
            raise ValidationError(f"bracket ({i},{j}) needs i < j", where)
        if (i, j) in seen:
            raise ValidationError(f"bracket ({i},{j}) given twice", where)
        seen.add((i, j))
        parsed = []
        for m, comp in enumerate(comps):
            w = f"{where}[{m}]"
            if not isinstance(comp, list) or len(comp) != 2:
                raise ValidationError("expected [k, value]", w)
            parsed.append((_index(comp[0], w), _scalar(comp[1], radicand, w)))
        brackets.append((i, j, tuple(parsed)))

    phi = []
    for n, entry in enumerate(doc.get("phi", [])):
        where = f"phi[{n}]"
        if not isinstance(entry, list) or len(entry) != 4:
            raise ValidationError("expected [i, j, k, value]", where)
        i, j, k = (_index(x, where) for x in entry[:3])
        if not i < j < k:
            raise ValidationError(f"phi index ({i},{j},{k}) needs i < j < k", where)
        phi.append((i, j, k, _scalar(entry[3], radicand, where)))
    if not phi:
        raise ValidationError("phi has no terms", "phi")

    vol = doc.get("vol")
    if vol is not None:
        vol = _scalar(vol, radicand, "vol")
        if not vol:
            raise ValidationError("vol must be nonzero", "vol")

    metric = doc.get("metric")
    if metric is not None:
        if isinstance(metric, str):
            try:
                m = parse_symmetric_product(metric, radicand)
            except G2ParaError as exc:
                raise ValidationError(str(exc), "metric") from None
            metric = tuple((i + 1, j + 1, m.matrix[i * DIM + j])
                           for i in range(DIM) for j in range(i, DIM) if m.matrix[i * DIM + j])
        else:
            entries = []
            for n, entry in enumerate(metric):
                where = f"metric[{n}]"
                if not isinstance(entry, list) or len(entry) != 3:
                    raise ValidationError("expected [i, j, value]", where)
                i, j = sorted((_index(entry[0], where), _index(entry[1], where)))
                entries.append((i, j, _scalar(entry[2], radicand, where)))
            metric = tuple(entries)

    if mode == "literal" and vol is None and metric is None:
        raise ValidationError("literal mode needs 'vol' or 'metric'", "mode")

    xi = doc.get("xi")
    if xi is not None:
        if not isinstance(xi, list) or len(xi) != DIM:
            raise ValidationError(f"xi needs {DIM} entries", "xi")
        xi = tuple(_scalar(x, radicand, f"xi[{n}]") for n, x in enumerate(xi))

    spec = ProblemSpec(tuple(brackets), tuple(phi), vol, metric, xi, radicand, mode, orientation)
    report = check_jacobi(spec.lie_algebra())
    if not report.ok:
        i, j, k = report.triple
        raise ValidationError(
            f"Jacobi identity fails on (f{i}, f{j}, f{k}); residual {report.residual.render()}", "brackets")
    return spec


def emit(spec: ProblemSpec) -> str:
    """Serialise to a document that :func:`parse_spec` reads back to an equal spec."""
    q = lambda v: '"' + format_scalar(v) + '"'  # noqa: E731
    lines = [f"radicand = {spec.radicand}", f'mode = "{spec.mode}"']
    if spec.orientation is not None:
        lines.append(f"orientation = {spec.orientation}")
    lines.append("brackets = [")
    for i, j, comps in spec.brackets:
        inner = ", ".join(f"[{k}, {q(c)}]" for k, c in comps)
        lines.append(f"  [{i}, {j}, [{inner}]],")
    lines.append("]")
    lines.append("phi = [")
    for i, j, k, c in spec.phi:
        lines.append(f"  [{i}, {j}, {k}, {q(c)}],")
    lines.append("]")
    if spec.vol is not None:
        lines.append(f"vol = {q(spec.vol)}")
    if spec.metric is not None:
        lines.append("metric = [")
        for i, j, c in spec.metric:
            lines.append(f"  [{i}, {j}, {q(c)}],")
        lines.append("]")
    if spec.xi is not None:
        lines.append("xi = [" + ", ".join(q(x) for x in spec.xi) + "]")
    return "\n".join(lines) + "\n"


def bundled_problem(stem: str) -> str | None:
    """Text of a problem file shipped with the package, or None."""
    path = resources.files("g2para") / "data" / f"{stem}.toml"
    return path.read_text() if path.is_file() else None


def resolve_path(path: str | None) -> tuple[str, str]:
    """(text, source) for a path; a missing file falls back to the bundled file of the same stem."""
    if path is None:
        return bundled_problem("paper_sec4"), "bundled:paper_sec4"
    p = Path(path)
    if p.is_file():
        return p.read_text(), str(p)
    text = bundled_problem(p.stem)
    if text is None:
        raise ValidationError(f"no such problem file: {path}")
    return text, f"bundled:{p.stem}"


def load_problem(path: str | None = None) -> ProblemSpec:
    text, _ = resolve_path(path)
    return parse_spec(text)


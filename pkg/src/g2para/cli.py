"""Command line: tables, audit, classify, chain, sample."""

from __future__ import annotations

import argparse
import json
import random
import sys
from dataclasses import dataclass, field

from .apcms import axiom_audit, f_tensor, induce, sample_unit_timelike
from .classify import classify, normality_defect, paracontact_defect, proj_w2
from .errors import ChainBrokenError, ConsistencyError, G2ParaError, ValidationError
from .exterior import DIM, Vector
from .liealg import levi_civita
from .problem import ProblemSpec, load_problem
from .scalar import exact, invert, is_zero, nth_root_exact, parse_scalar
from .symbolic import deduction_chain, scenario_names

__all__ = ["Report", "main", "run"]

EXIT_OK, EXIT_VALIDATION, EXIT_CONSISTENCY, EXIT_CHAIN = 0, 1, 2, 3
REPORT_KEYS = ("tables", "audit", "classes", "witnesses", "chains", "mode", "granularity")


@dataclass
class Report:
    data: dict
    lines: list = field(default_factory=list)
    exit_code: int = EXIT_OK

    @property
    def text(self) -> str:
        return "\n".join(self.lines)

    def to_json(self) -> str:
        return json.dumps(self.data, indent=2, sort_keys=True)


def _empty(mode, granularity=None):
    d = dict.fromkeys(REPORT_KEYS)
    d["mode"] = mode
    d["granularity"] = granularity
    return d


def _parse_xi(text: str, radicand: int):
    parts = text.split(",")
    if len(parts) != DIM:
        raise ValidationError(f"--xi needs {DIM} comma-separated scalars, got {len(parts)}", "--xi")
    try:
        return Vector(parse_scalar(p, radicand) for p in parts)
    except G2ParaError as exc:
        raise ValidationError(str(exc), "--xi") from None


def _xi_for(spec: ProblemSpec, bundle, xi_text, mode):
    if xi_text:
        return _parse_xi(xi_text, spec.radicand)
    xi = spec.xi_vector()
    if xi is None:
        raise ValidationError("no xi given (use --xi or an 'xi' entry)", "xi")
    norm = bundle.g(xi, xi)
    if mode != spec.mode and norm != -1 and norm and norm < 0:
        # the file's xi is unit for its own metric; rescale when the root stays exact
        r = nth_root_exact(exact(-norm, spec.radicand), 2)
        if r is not None:
            return xi * invert(r)
    return xi


def _tables(spec, bundle, conn):
    nab = {f"{i},{j}": v.render() for (i, j), v in conn.nonzero().items()}
    prod = {f"{i},{j}": v.render() for (i, j), v in bundle.nonzero_products().items()}
    lines = [f"nabla ({len(nab)} nonzero entries):"]
    lines += [f"  nabla_f{k.split(',')[0]} f{k.split(',')[1]} = {v}" for k, v in nab.items()]
    lines.append(f"P ({len(prod)} nonzero entries, i < j):")
    lines += [f"  P(f{k.split(',')[0]}, f{k.split(',')[1]}) = {v}" for k, v in prod.items()]
    return {"nabla": nab, "P": prod}, lines


def _audit(s):
    a = axiom_audit(s)
    data = {k: {"ok": r.ok, "witness": list(r.witness) if r.witness else None, "detail": r.detail}
            for k, r in a.results.items()}
    lines = ["axiom audit:"]
    for k, r in a.results.items():
        lines.append(f"  {k:14s} {'pass' if r.ok else 'FAIL'}" + (f"   {r.detail}" if r.detail else ""))
    return data, lines


def run(command: str, spec: ProblemSpec, *, mode: str | None = None, xi: str | None = None,
        granularity: str = "grouped", route: str = "tensor", scenario: str = "normal",
        n: int = 20, seed: int = 0) -> Report:
    """Execute one command on a validated problem."""
    mode = mode or spec.mode
    bundle = spec.bundle(mode)
    conn = levi_civita(spec.lie_algebra(), bundle.g)
    data = _empty(mode, granularity if command == "classify" else None)

    if command == "tables":
        data["tables"], lines = _tables(spec, bundle, conn)
        return Report(data, lines)

    if command == "audit":
        s = induce(bundle, _xi_for(spec, bundle, xi, mode))
        data["audit"], lines = _audit(s)
        return Report(data, lines)

    if command == "classify":
        s = induce(bundle, _xi_for(spec, bundle, xi, mode))
        F = f_tensor(s, conn)
        rep = classify(s, conn, granularity, route, F)
        d = rep.to_dict()
        data["audit"], audit_lines = _audit(s)
        data["witnesses"] = d.pop("witnesses")
        data["classes"] = d
        data["tables"], _ = _tables(spec, bundle, conn)
        lines = [f"xi = {s.xi.render()}   mode: {mode}"] + audit_lines + rep.render().splitlines()
        return Report(data, lines)

    if command == "chain":
        rep = deduction_chain(scenario, spec.lie_algebra(), bundle)
        data["chains"] = {rep.scenario: rep.to_dict()}
        return Report(data, rep.render().splitlines(), EXIT_OK if rep.verified else EXIT_CHAIN)

    if command == "sample":
        return _sample(spec, bundle, conn, data, n, seed)

    raise ValidationError(f"unknown command {command!r}")


def _base_point(bundle, spec):
    xi = spec.xi_vector()
    if xi is not None and bundle.g(xi, xi) == -1:
        return xi
    for i in range(DIM):
        e = Vector.basis(i + 1)
        gii = bundle.g(e, e)
        if gii and gii < 0:
            return e * (1.0 / float(-gii) ** 0.5)
    raise ValidationError("no timelike basis direction to start sampling from")


def _sample(spec, bundle, conn, data, n, seed):
    """Float survey over random unit timelike xi."""
    rng = random.Random(seed)
    base = _base_point(bundle, spec)
    rows = []
    counts = {"normal": 0, "paracontact": 0, "w2_zero": 0, "audit_ok": 0}
    class_hist = {}
    for _ in range(n):
        xi = sample_unit_timelike(bundle.g, base, rng, as_float=True)
        s = induce(bundle, xi, rescale=True)
        F = f_tensor(s, conn)
        rep = classify(s, conn, "grouped", "tensor", F)
        normal = normality_defect(s, conn, F, cross_check=False).is_zero()
        para = all(is_zero(v) for v in paracontact_defect(s, conn))
        w2_zero = proj_w2(F, s).is_zero()
        audit_ok = axiom_audit(s).ok
        counts["normal"] += normal
        counts["paracontact"] += para
        counts["w2_zero"] += w2_zero
        counts["audit_ok"] += audit_ok
        key = ",".join(g for g, on in rep.groups.items() if on) or "none"
        class_hist[key] = class_hist.get(key, 0) + 1
        rows.append({"xi": [float(x) for x in s.xi], "groups": key, "normal": normal,
                     "paracontact": para, "w2_zero": w2_zero, "audit_ok": audit_ok})
    data["classes"] = {"samples": rows, "counts": counts, "histogram": class_hist, "seed": seed, "n": n}
    lines = [f"{n} samples (seed {seed}), mode {data['mode']}:",
             f"  axiom audit clean: {counts['audit_ok']}/{n}",
             f"  normal: {counts['normal']}   paracontact: {counts['paracontact']}   F^W2 = 0: {counts['w2_zero']}",
             "  class groups:"]
    lines += [f"    {k}: {v}" for k, v in sorted(class_hist.items())]
    return Report(data, lines)


def _build_parser():
    p = argparse.ArgumentParser(prog="g2para", description=__doc__)
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp):
        sp.add_argument("problem", nargs="?", default=None,
                        help="problem file (TOML); a missing path falls back to the bundled file of the same name")
        sp.add_argument("--mode", choices=("literal", "normalized"))
        sp.add_argument("--json", action="store_true", help="machine-readable report")

    common(sub.add_parser("tables", help="nonzero covariant derivatives and cross products"))
    sp = sub.add_parser("audit", help="axiom audit of the induced structure")
    common(sp)
    sp.add_argument("--xi")
    sp = sub.add_parser("classify", help="class membership report")
    common(sp)
    sp.add_argument("--xi", help="seven comma-separated scalars")
    sp.add_argument("--granularity", choices=("grouped", "fine"), default="grouped")
    sp.add_argument("--route", choices=("tensor", "reduced"), default="tensor")
    sp = sub.add_parser("chain", help="replay a nonexistence deduction")
    common(sp)
    sp.add_argument("--scenario", default="normal", help="one of: " + ", ".join(scenario_names()))
    sp = sub.add_parser("sample", help="float survey over random unit timelike xi")
    common(sp)
    sp.add_argument("--n", type=int, default=20)
    sp.add_argument("--seed", type=int, default=0)
    return p


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    opts = {k: v for k, v in vars(args).items()
            if k in ("mode", "xi", "granularity", "route", "scenario", "n", "seed") and v is not None}
    try:
        spec = load_problem(args.problem)
        report = run(args.command, spec, **opts)
    except ChainBrokenError as exc:
        print(f"chain broken: {exc}", file=sys.stderr)
        return EXIT_CHAIN
    except ConsistencyError as exc:
        print(f"internal consistency error: {exc}", file=sys.stderr)
        return EXIT_CONSISTENCY
    except G2ParaError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    print(report.to_json() if args.json else report.text)
    return report.exit_code


if __name__ == "__main__":
    sys.exit(main())

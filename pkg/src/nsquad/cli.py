"""Command-line driver: convergence studies, coefficient dumps, single evaluations.

Output is CSV or JSON with floats in shortest round-trip decimal form and
rows sorted by (d, n, method), so identical configurations produce
bit-identical files.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass

import numpy as np

from .corrections import GEval
from .emcoeff import CoeffParams, coeff_table, pks_closed
from .integrator import KernelParams, integrate_near_singular
from .meshrule import Mesh, plain_trapezoid
from .oracle import exact_test1, exact_test2, reference_integral

CONVERGE_METHODS = ("uncorrected-punctured", "uncorrected-plain",
                    "corrected-closed", "corrected-fd6")

CSV_HEADER = "n,h,d,c,xs,method,value,reference,abs_err"


@dataclass(frozen=True)
class ConvergenceRow:
    n: int
    h: float
    d: float
    c: float
    xs: float
    method: str
    value: float
    reference: float
    abs_err: float


@dataclass
class StudyConfig:
    d_list: list[float]
    n_list: list[int]
    c: float = 1.0
    x_s: float = 0.0
    a: float = 1.0
    integrand: str = "test1"
    methods: tuple[str, ...] = CONVERGE_METHODS
    out: str = "-"
    fmt: str = "csv"
    g_expr: str | None = None

    def __post_init__(self):
        if not self.d_list or not self.n_list:
            raise ValueError("d and n lists must be nonempty")
        if self.integrand not in ("test1", "test2", "custom"):
            raise ValueError("integrand must be test1, test2, or custom")
        bad = [m for m in self.methods if m not in CONVERGE_METHODS]
        if bad:
            raise ValueError(f"unknown methods {bad}; choose from {CONVERGE_METHODS}")
        if self.fmt not in ("csv", "json"):
            raise ValueError("format must be csv or json")
        if self.integrand == "test1" and (self.c != 1.0 or self.x_s != 0.0):
            raise ValueError("test1 is defined for c = 1, x_s = 0; use test2")
        if self.integrand == "custom" and not self.g_expr:
            raise ValueError("custom integrand needs --g-expr")
        if any(d <= 0.0 for d in self.d_list):
            raise ValueError("convergence studies require d > 0")


_EXPR_NAMES = {
    "exp": np.exp, "sin": np.sin, "cos": np.cos, "tan": np.tan,
    "sinh": np.sinh, "cosh": np.cosh, "tanh": np.tanh,
    "sqrt": np.sqrt, "log": np.log, "abs": np.abs,
    "pi": np.pi, "e": np.e,
}


def _compile_g_expr(expr: str) -> GEval:
    try:
        f = eval(f"lambda x: ({expr})", {"__builtins__": {}, **_EXPR_NAMES})
        f(0.1)
    except Exception as exc:
        raise ValueError(f"cannot evaluate g expression {expr!r}: {exc}") from exc
    return GEval.analytic(f)


def _study_integrand(config: StudyConfig, d: float) -> GEval:
    if config.integrand in ("test1", "test2"):
        return GEval.analytic(lambda z, d=d: d * np.exp(z))
    return _compile_g_expr(config.g_expr)


def _study_reference(config: StudyConfig, g: GEval, d: float) -> float:
    if config.integrand == "test1":
        return exact_test1(d)
    if config.integrand == "test2":
        return exact_test2(d, config.c, config.x_s)
    params = KernelParams(a=config.a, c=config.c, d=d, x_s=config.x_s)
    # coarse pass fixes the scale; the tolerance is absolute
    coarse = reference_integral(g, params, tol=1e-6).value
    return reference_integral(g, params,
                              tol=1e-13 * max(1.0, abs(coarse))).value


def _method_value(method: str, g: GEval, params: KernelParams, n: int) -> float:
    if method == "corrected-closed":
        return integrate_near_singular(g, params, n, method="closed-form").value
    if method == "corrected-fd6":
        return integrate_near_singular(g, params, n, method="fd-series").value
    mesh = Mesh(params.a, n)
    nodes = mesh.nodes()
    samples = np.array([g.real_eval(x) for x in nodes])
    denom = params.d ** 2 + params.c ** 2 * (nodes - params.x_s) ** 2
    f = samples / denom
    if method == "uncorrected-plain":
        return plain_trapezoid(mesh, f)
    res = integrate_near_singular(g, params, n, method="auto")
    return res.uncorrected


def run_converge(config: StudyConfig) -> list[ConvergenceRow]:
    rows = []
    for d in config.d_list:
        g = _study_integrand(config, d)
        reference = _study_reference(config, g, d)
        params = KernelParams(a=config.a, c=config.c, d=d, x_s=config.x_s)
        for n in config.n_list:
            h = config.a / n
            for method in config.methods:
                value = _method_value(method, g, params, n)
                rows.append(ConvergenceRow(
                    n=n, h=h, d=d, c=config.c, xs=config.x_s, method=method,
                    value=float(value), reference=float(reference),
                    abs_err=float(abs(value - reference))))
    rows.sort(key=lambda r: (r.d, r.n, r.method))
    return rows


def _rows_to_csv(rows: list[ConvergenceRow]) -> str:
    lines = [CSV_HEADER]
    for r in rows:
        lines.append(",".join([
            str(r.n), repr(float(r.h)), repr(float(r.d)), repr(float(r.c)),
            repr(float(r.xs)), r.method, repr(float(r.value)),
            repr(float(r.reference)), repr(float(r.abs_err))]))
    return "\n".join(lines) + "\n"


def _rows_to_json(rows: list[ConvergenceRow]) -> str:
    payload = [{"n": r.n, "h": float(r.h), "d": float(r.d), "c": float(r.c),
                "xs": float(r.xs), "method": r.method, "value": float(r.value),
                "reference": float(r.reference), "abs_err": float(r.abs_err)}
               for r in rows]
    return json.dumps(payload, indent=2) + "\n"


def _write_output(text: str, out: str) -> None:
    if out == "-":
        sys.stdout.write(text)
    else:
        with open(out, "w") as fh:
            fh.write(text)


def cmd_converge(config: StudyConfig) -> int:
    rows = run_converge(config)
    text = _rows_to_csv(rows) if config.fmt == "csv" else _rows_to_json(rows)
    _write_output(text, config.out)
    return 0


def cmd_coeffs(lam: float, s: float, h: float, k_max: int,
               out: str = "-", fmt: str = "csv") -> int:
    """Dump z_k, z_{k,s}, z_{k,-s}, p_{k,s} with identity-residual columns."""
    params = CoeffParams(lam=lam, s=s, h=h, k_max=k_max)
    table = coeff_table(params)
    closed = pks_closed(params)
    signs = (-1.0) ** np.arange(k_max + 1)
    sym_resid = np.abs(table.pks - (table.zk_minus_s + signs * table.zks))
    closed_resid = np.abs(table.pks - closed)
    if fmt == "csv":
        lines = ["k,zk,zks,zk_minus_s,pks,sym_resid,closedform_resid"]
        for k in range(k_max + 1):
            lines.append(",".join([
                str(k), repr(float(table.zk[k])), repr(float(table.zks[k])),
                repr(float(table.zk_minus_s[k])), repr(float(table.pks[k])),
                repr(float(sym_resid[k])), repr(float(closed_resid[k]))]))
        for w in table.warnings:
            lines.append(f"# warning: {w}")
        text = "\n".join(lines) + "\n"
    else:
        payload = {
            "lambda": lam, "s": s, "h": h,
            "rows": [{"k": k, "zk": float(table.zk[k]), "zks": float(table.zks[k]),
                      "zk_minus_s": float(table.zk_minus_s[k]), "pks": float(table.pks[k]),
                      "sym_resid": float(sym_resid[k]),
                      "closedform_resid": float(closed_resid[k])}
                     for k in range(k_max + 1)],
            "warnings": list(table.warnings),
        }
        text = json.dumps(payload, indent=2) + "\n"
    _write_output(text, out)
    return 0


def cmd_eval(a: float, c: float, d: float, x_s: float, n: int,
             integrand: str = "test2", g_expr: str | None = None,
             method: str = "auto", out: str = "-") -> int:
    """Evaluate one corrected integral and print the QuadResult as JSON."""
    if integrand in ("test1", "test2"):
        g = GEval.analytic(lambda z: d * np.exp(z))
    elif integrand == "custom":
        if not g_expr:
            raise ValueError("custom integrand needs --g-expr")
        g = _compile_g_expr(g_expr)
    else:
        raise ValueError("integrand must be test1, test2, or custom")
    params = KernelParams(a=a, c=c, d=d, x_s=x_s)
    res = integrate_near_singular(g, params, n, method=method)
    payload = {
        "value": res.value,
        "uncorrected": res.uncorrected,
        "singular_part": res.breakdown.singular_part,
        "jump_part": res.breakdown.jump_part,
        "method": res.method,
        "n": n, "h": res.mesh.h, "a": a, "c": c, "d": d, "xs": x_s,
        "warnings": res.warnings,
    }
    _write_output(json.dumps(payload, indent=2) + "\n", out)
    return 0


def parse_n_range(text: str) -> list[int]:
    """Parse '16:256:*2' (geometric) or '16,32,64' (explicit) n lists."""
    if ":" in text:
        parts = text.split(":")
        if len(parts) != 3 or not parts[2].startswith("*"):
            raise ValueError("n range must look like start:stop:*factor")
        start, stop, factor = int(parts[0]), int(parts[1]), int(parts[2][1:])
        if start < 1 or stop < start or factor < 2:
            raise ValueError("invalid n range")
        out = []
        n = start
        while n <= stop:
            out.append(n)
            n *= factor
        return out
    return [int(tok) for tok in text.split(",") if tok]


def parse_float_list(text: str) -> list[float]:
    return [float(tok) for tok in text.split(",") if tok]


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="nsquad",
        description="Corrected trapezoidal quadrature for near-singular "
                    "and finite-part integrals")
    sub = p.add_subparsers(dest="command", required=True)

    pc = sub.add_parser("converge", help="run a convergence study")
    pc.add_argument("--integrand", default="test1",
                    choices=("test1", "test2", "custom"))
    pc.add_argument("--g-expr", default=None,
                    help="numerator g(x) for --integrand custom, e.g. 'exp(x)'")
    pc.add_argument("--d", required=True, help="comma list of d values")
    pc.add_argument("--n", required=True,
                    help="comma list or geometric range start:stop:*factor")
    pc.add_argument("--method", default=",".join(CONVERGE_METHODS),
                    help="comma list of methods")
    pc.add_argument("--a", type=float, default=1.0)
    pc.add_argument("--c", type=float, default=1.0)
    pc.add_argument("--xs", type=float, default=0.0)
    pc.add_argument("--format", default="csv", choices=("csv", "json"))
    pc.add_argument("--out", default="-")

    pk = sub.add_parser("coeffs", help="dump correction coefficients")
    pk.add_argument("--lambda", dest="lam", type=float, required=True)
    pk.add_argument("--s", type=float, default=0.0)
    pk.add_argument("--h", type=float, default=0.01)
    pk.add_argument("--kmax", type=int, default=12)
    pk.add_argument("--format", default="csv", choices=("csv", "json"))
    pk.add_argument("--out", default="-")

    pe = sub.add_parser("eval", help="evaluate one corrected integral")
    pe.add_argument("--integrand", default="test2",
                    choices=("test1", "test2", "custom"))
    pe.add_argument("--g-expr", default=None)
    pe.add_argument("--a", type=float, default=1.0)
    pe.add_argument("--c", type=float, default=1.0)
    pe.add_argument("--d", type=float, required=True)
    pe.add_argument("--xs", type=float, default=0.0)
    pe.add_argument("--n", type=int, default=64)
    pe.add_argument("--method", default="auto",
                    choices=("auto", "closed-form", "fd-series"))
    pe.add_argument("--out", default="-")
    return p


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        if args.command == "converge":
            config = StudyConfig(
                d_list=parse_float_list(args.d),
                n_list=parse_n_range(args.n),
                c=args.c, x_s=args.xs, a=args.a,
                integrand=args.integrand,
                methods=tuple(m for m in args.method.split(",") if m),
                out=args.out, fmt=args.format, g_expr=args.g_expr)
            return cmd_converge(config)
        if args.command == "coeffs":
            return cmd_coeffs(args.lam, args.s, args.h, args.kmax,
                              out=args.out, fmt=args.format)
        return cmd_eval(args.a, args.c, args.d, args.xs, args.n,
                        integrand=args.integrand, g_expr=args.g_expr,
                        method=args.method, out=args.out)
    except (ValueError, RuntimeError) as exc:
        print(f"nsquad: error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())

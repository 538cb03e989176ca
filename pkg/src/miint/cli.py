"""Command-line surface: every computation and check suite, with reproducible
configuration and machine-readable output.

JSON goes to stdout (complex numbers as [re, im] pairs, polynomials as
ascending coefficient arrays); diagnostics go to stderr.  Exit codes:
0 success, 1 usage error, 2 precision/convergence failure, 3 check failure.
"""

from __future__ import annotations

import argparse
import csv
import json
import sys
from fractions import Fraction

from . import checks, iterated, periods, qforms, raseries, vvdim
from .config import RunConfig, load_config
from .errors import ConvergenceError, PrecisionError
from .group import BiWeight, GroupElement, PolyC, S, T, T_pow
from .raseries import TruncationParams

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_PRECISION = 2
EXIT_CHECK = 3


class _UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise _UsageError(message)


def _cnum(x: complex) -> list[float]:
    return [float(x.real), float(x.imag)]


def _poly(p: PolyC) -> list[list[float]]:
    return [_cnum(c) for c in p.coeffs]


def _coeff_json(c) -> object:
    if isinstance(c, Fraction):
        return str(c)
    return int(c)


def parse_gamma(text: str) -> GroupElement:
    """Accept 'S', 'T', 'T^n', '-I', products joined by '*', or 'a,b,c,d'."""
    text = text.strip()
    if "," in text:
        a, b, c, d = (int(v) for v in text.split(","))
        return GroupElement(a, b, c, d)
    g = None
    for tok in text.split("*"):
        tok = tok.strip()
        if tok == "S":
            elem = S
        elif tok == "T":
            elem = T
        elif tok.startswith("T^"):
            elem = T_pow(int(tok[2:]))
        elif tok == "I":
            elem = GroupElement(1, 0, 0, 1)
        elif tok == "-I":
            elem = GroupElement(-1, 0, 0, -1)
        else:
            raise _UsageError(f"cannot parse group element token {tok!r}")
        g = elem if g is None else g * elem
    if g is None:
        raise _UsageError("empty group element")
    return g


def resolve_form(name: str, N: int) -> qforms.QExpansion:
    """'delta', 'e<k>' for Eisenstein, or 's<k>[.<i>]' for a cusp basis form."""
    name = name.strip().lower()
    if name == "delta":
        return qforms.delta_q(N)
    if name.startswith("e"):
        return qforms.eisenstein_q(int(name[1:]), N)
    if name.startswith("s"):
        body = name[1:]
        idx = 0
        if "." in body:
            body, idx_s = body.split(".", 1)
            idx = int(idx_s)
        basis = qforms.cusp_basis(int(body), N)
        if not basis:
            raise _UsageError(f"no cusp forms of weight {body}")
        return basis[idx]
    raise _UsageError(f"unknown form {name!r}")


def _trunc(cfg: RunConfig) -> TruncationParams:
    return TruncationParams(cfg.C, cfg.D, cfg.N, cfg.M, cfg.fd_h, cfg.tol)


def _emit(payload: dict, cfg: RunConfig) -> None:
    payload = {"config": cfg.to_dict(), **payload}
    json.dump(payload, sys.stdout, sort_keys=True)
    sys.stdout.write("\n")


def _emit_csv(rows: list[dict]) -> None:
    if not rows:
        return
    writer = csv.DictWriter(sys.stdout, fieldnames=list(rows[0].keys()))
    writer.writeheader()
    writer.writerows(rows)


def build_parser() -> _Parser:
    # SUPPRESS keeps subparser re-parsing from clobbering pre-command flags
    common = argparse.ArgumentParser(add_help=False, argument_default=argparse.SUPPRESS)
    common.add_argument("--config", help="path to a KEY=VALUE config file")
    for name, typ in (
        ("C", int),
        ("D", int),
        ("N", int),
        ("M", int),
        ("threads", int),
    ):
        common.add_argument(f"--{name}", type=typ)
    common.add_argument("--fd-h", dest="fd_h", type=float)
    common.add_argument("--tol", type=float)
    common.add_argument("--format", choices=("json", "csv"))

    parser = _Parser(prog="miint", description=__doc__, parents=[common])
    sub = parser.add_subparsers(dest="cmd", required=True)

    def add_parser(name, **kw):
        return sub.add_parser(name, parents=[common], **kw)

    p = add_parser("forms", help="dump exact q-expansion coefficients")
    p.add_argument("--kind", choices=("eisenstein", "delta", "cusp-basis"), default="delta")
    p.add_argument("--weight", type=int, default=12)

    p = add_parser("eval", help="evaluate a form at a point")
    p.add_argument("--form", default=None)
    p.add_argument("--z", nargs=2, type=float, metavar=("RE", "IM"), default=None)

    p = add_parser("period", help="period polynomial r(gamma; X)")
    p.add_argument("--form", default=None)
    p.add_argument("--gamma", default="S")
    p.add_argument("--sign", choices=("+", "-"), default="+")

    p = add_parser("lvalue", help="twisted completed L-value")
    p.add_argument("--form", default=None)
    p.add_argument("--s", type=int, required=True)
    p.add_argument("--p", type=int, default=0)
    p.add_argument("--q", type=int, default=1)
    p.add_argument("--method", choices=("auto", "series", "extract"), default="auto")

    p = add_parser("eisenstein", help="real-analytic Eisenstein series value")
    p.add_argument("--r", type=int, default=None)
    p.add_argument("--s", type=int, default=None)
    p.add_argument("--z", nargs=2, type=float, metavar=("RE", "IM"), default=None)

    p = add_parser("phi", help="invariant series coefficients")
    p.add_argument("--form", default=None)
    p.add_argument("--r", type=int, default=None)
    p.add_argument("--s", type=int, default=None)
    p.add_argument("--sign", choices=("+", "-"), default="+")
    p.add_argument("--z", nargs=2, type=float, metavar=("RE", "IM"), default=None)
    p.add_argument("--j", type=int, default=None, help="single basis coefficient")

    p = add_parser("fourier", help="Fourier mode of a form or psi coefficient")
    p.add_argument("--form", default=None)
    p.add_argument("--psi", action="store_true", help="use a psi basis coefficient")
    p.add_argument("--i", type=int, default=0)
    p.add_argument("--r", type=int, default=None)
    p.add_argument("--s", type=int, default=None)
    p.add_argument("--l", type=int, required=True)
    p.add_argument("--y", type=float, default=1.0)

    p = add_parser("iterated", help="iterated Eichler integral coefficients")
    p.add_argument("--depth", type=int, choices=(1, 2, 3), default=2)
    p.add_argument("--forms", default=None, help="comma-separated, e.g. delta,delta")
    p.add_argument("--z", nargs=2, type=float, metavar=("RE", "IM"), default=None)

    p = add_parser("dim", help="dimension formulas")
    p.add_argument("--k", type=int, default=16)
    p.add_argument("--k1", type=int, default=12)
    p.add_argument("--table", type=int, default=None, help="emit table up to kmax")

    p = add_parser("check", help="run a named verification suite")
    p.add_argument("suite", choices=sorted(checks.SUITES) + ["all"])
    return parser


def _cmd_forms(ns, cfg: RunConfig) -> int:
    if ns.kind == "delta":
        forms = [("delta", qforms.delta_q(cfg.N))]
    elif ns.kind == "eisenstein":
        forms = [(f"e{ns.weight}", qforms.eisenstein_q(ns.weight, cfg.N))]
    else:
        forms = [
            (f"s{ns.weight}.{i}", f)
            for i, f in enumerate(qforms.cusp_basis(ns.weight, cfg.N))
        ]
    if cfg.format == "csv":
        rows = []
        for name, f in forms:
            for n, c in enumerate(f.coeffs):
                rows.append({"form": name, "n": n, "a_n": str(c)})
        _emit_csv(rows)
        return EXIT_OK
    payload = {
        "forms": {
            name: {"weight": f.k, "coeffs": [_coeff_json(c) for c in f.coeffs]}
            for name, f in forms
        }
    }
    _emit(payload, cfg)
    return EXIT_OK


def _cmd_eval(ns, cfg: RunConfig) -> int:
    f = resolve_form(ns.form or cfg.form, cfg.N)
    z = complex(*ns.z) if ns.z else cfg.z
    val = qforms.eval_form(f, z)
    _emit(
        {
            "value": _cnum(val),
            "tail": qforms.eval_tail_bound(f, z.imag),
            "z": _cnum(z),
        },
        cfg,
    )
    return EXIT_OK


def _cmd_period(ns, cfg: RunConfig) -> int:
    f = resolve_form(ns.form or cfg.form, cfg.N)
    g = parse_gamma(ns.gamma)
    poly = periods.period_poly(f, g, ns.sign)
    _emit(
        {
            "gamma": list(g.entries),
            "sign": ns.sign,
            "coeffs": _poly(poly),
            "error_estimate": periods.period_error_estimate(f, g, ns.sign),
        },
        cfg,
    )
    return EXIT_OK


def _cmd_lvalue(ns, cfg: RunConfig) -> int:
    f = resolve_form(ns.form or cfg.form, cfg.N)
    method = ns.method
    if method == "auto":
        method = "series" if periods.series_convergent(f, ns.s) else "extract"
    val = periods.twisted_L(f, ns.s, ns.p, ns.q, method=method)
    if method == "series":
        err = abs(val - periods.twisted_L(f, ns.s, ns.p, ns.q, method="extract"))
    else:
        g = periods.complete_row(ns.q, -(ns.p % ns.q)) if ns.q > 1 else periods.S
        err = periods.period_error_estimate(f, g)
    _emit(
        {
            "value": _cnum(val),
            "s": ns.s,
            "twist": [ns.p, ns.q],
            "method": method,
            "error_estimate": err,
        },
        cfg,
    )
    return EXIT_OK


def _cmd_eisenstein(ns, cfg: RunConfig) -> int:
    w = BiWeight(ns.r if ns.r is not None else cfg.r, ns.s if ns.s is not None else cfg.s)
    z = complex(*ns.z) if ns.z else cfg.z
    sv = raseries.eisenstein_rs(w, z, _trunc(cfg), threads=cfg.threads)
    _emit(
        {
            "weights": [w.r, w.s],
            "value": _cnum(sv.value),
            "tail": sv.tail_estimate,
            "trunc": {"C": cfg.C, "D": cfg.D, "N": cfg.N},
        },
        cfg,
    )
    return EXIT_OK


def _cmd_phi(ns, cfg: RunConfig) -> int:
    f = resolve_form(ns.form or cfg.form, cfg.N)
    w = BiWeight(ns.r if ns.r is not None else cfg.r, ns.s if ns.s is not None else cfg.s)
    z = complex(*ns.z) if ns.z else cfg.z
    t = _trunc(cfg)
    sv = raseries.phi(f, w, ns.sign, z, t, threads=cfg.threads)
    payload = {
        "weights": [w.r, w.s],
        "sign": ns.sign,
        "tail": sv.tail_estimate,
        "trunc": {"C": cfg.C, "D": cfg.D, "N": cfg.N},
    }
    if ns.j is not None:
        vec = raseries.coeff_decompose(sv.value, z, f.k)
        payload["j"] = ns.j
        payload["coefficient"] = _cnum(complex(vec[ns.j]))
    else:
        payload["coeffs"] = _poly(sv.value)
    _emit(payload, cfg)
    return EXIT_OK


def _cmd_fourier(ns, cfg: RunConfig) -> int:
    t = _trunc(cfg)
    if ns.psi:
        f = resolve_form(ns.form or cfg.form, cfg.N)
        w = BiWeight(ns.r if ns.r is not None else cfg.r, ns.s if ns.s is not None else cfg.s)

        def fn(z: complex) -> complex:
            val = raseries.psi_series(f, w, "+", z, t).value
            return complex(raseries.coeff_decompose(val, z, f.k)[ns.i])

    else:
        form = resolve_form(ns.form or cfg.form, cfg.N)
        fn = lambda z: qforms.eval_form(form, z)
    val = raseries.fourier_coefficient(fn, ns.l, ns.y, cfg.M)
    coarse = raseries.fourier_coefficient(fn, ns.l, ns.y, max(64, cfg.M // 2))
    _emit(
        {
            "l": ns.l,
            "y": ns.y,
            "value": _cnum(val),
            "M": cfg.M,
            "error_estimate": abs(val - coarse),
        },
        cfg,
    )
    return EXIT_OK


def _cmd_iterated(ns, cfg: RunConfig) -> int:
    names = (ns.forms or "delta,delta").split(",")[: ns.depth - 1]
    forms = tuple(resolve_form(n, cfg.N) for n in names)
    data = iterated.IteratedIntegrand(forms)
    z = complex(*ns.z) if ns.z else cfg.z
    val = iterated.iterated_F(data, z)
    if ns.depth == 1:
        coeffs = [_cnum(complex(val))]
    elif ns.depth == 2:
        coeffs = _poly(val)
    else:
        coeffs = [[_cnum(c) for c in row] for row in val.coeffs]
    t_res = iterated.parabolic_residual(data, z)
    _emit(
        {
            "depth": ns.depth,
            "weights": list(data.weights),
            "coeffs": coeffs,
            "parabolic_residual": t_res,
        },
        cfg,
    )
    return EXIT_OK


def _cmd_dim(ns, cfg: RunConfig) -> int:
    if ns.table:
        rows = []
        for k in range(6, ns.table + 1, 2):
            for k1 in range(4, k, 2):
                rows.append(
                    {
                        "k": k,
                        "k1": k1,
                        "dim_Mk_rho": vvdim.dim_Mk_rho(k, k1),
                        "dim_M2c": vvdim.dim_M2c(k, k1),
                    }
                )
        if cfg.format == "csv":
            _emit_csv(rows)
        else:
            _emit({"table": rows}, cfg)
        return EXIT_OK
    _emit(
        {
            "dim_Mk_rho": vvdim.dim_Mk_rho(ns.k, ns.k1),
            "dim_M2c": vvdim.dim_M2c(ns.k, ns.k1),
        },
        cfg,
    )
    return EXIT_OK


def _cmd_check(ns, cfg: RunConfig) -> int:
    results = checks.run_suite(ns.suite)
    for res in results:
        print(res.line(), file=sys.stderr)
    payload = {
        "suite": ns.suite,
        "passed": all(r.passed for r in results),
        "results": [
            {
                "name": r.name,
                "passed": r.passed,
                "residual": r.residual,
                "tolerance": r.tolerance,
            }
            for r in results
        ],
    }
    _emit(payload, cfg)
    return EXIT_OK if payload["passed"] else EXIT_CHECK


_DISPATCH = {
    "forms": _cmd_forms,
    "eval": _cmd_eval,
    "period": _cmd_period,
    "lvalue": _cmd_lvalue,
    "eisenstein": _cmd_eisenstein,
    "phi": _cmd_phi,
    "fourier": _cmd_fourier,
    "iterated": _cmd_iterated,
    "dim": _cmd_dim,
    "check": _cmd_check,
}


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        ns = parser.parse_args(argv)
        cfg = load_config(getattr(ns, "config", None), ns)
        return _DISPATCH[ns.cmd](ns, cfg)
    except _UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (PrecisionError, ConvergenceError) as exc:
        print(f"precision/convergence failure: {exc}", file=sys.stderr)
        return EXIT_PRECISION


if __name__ == "__main__":
    sys.exit(main())

"""Named verification suites over the library's identities.

Each suite returns a list of CheckResult with the measured residual and the
tolerance it was held to.  Tolerances are pinned here, once, and shared by
the CLI `check` subcommand and the acceptance test module.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass, field

from . import iterated as it
from . import maass, periods, qforms, raseries, vvdim
from .group import (
    BiWeight,
    GroupElement,
    IDENTITY,
    S,
    T,
    T_pow,
    act_poly,
    act_tensor,
)
from .raseries import TruncationParams

DELTA_N = 120
SEED = 20260810


def _delta() -> qforms.QExpansion:
    return qforms.delta_q(DELTA_N)


@dataclass
class CheckResult:
    name: str
    passed: bool
    residual: float
    tolerance: float
    details: dict = field(default_factory=dict)

    def line(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        return f"[{status}] {self.name}: residual {self.residual:.3e} (tol {self.tolerance:.3e})"


def _result(name: str, residual: float, tol: float, **details) -> CheckResult:
    residual, tol = float(residual), float(tol)
    return CheckResult(name, bool(residual <= tol), residual, tol, dict(details))


def _random_word(rng: random.Random, max_len: int) -> GroupElement:
    """Random word over the generator letters S, T, T^-1."""
    g = IDENTITY
    for _ in range(rng.randint(1, max_len)):
        g = g * rng.choice((S, T, T.inv()))
    return g


# ---------------------------------------------------------------------- vvdim


def suite_vvdim_dims() -> list[CheckResult]:
    out = []
    out.append(_result("dim_Mk_rho(16,12) == 19", abs(vvdim.dim_Mk_rho(16, 12) - 19), 0))
    out.append(_result("dim_M2c(16,12) == 23", abs(vvdim.dim_M2c(16, 12) - 23), 0))
    out.append(_result("dim_Mk_rho(14,12) == 18", abs(vvdim.dim_Mk_rho(14, 12) - 18), 0))
    bad = 0
    for k in range(6, 41, 2):
        for k1 in range(4, k, 2):
            if k1 <= 2:
                continue
            try:
                vvdim.dim_Mk_rho(k, k1)
            except ArithmeticError:
                bad += 1
    out.append(_result("dim_Mk_rho integral over 4 < k1 < k <= 40", bad, 0))
    return out


def suite_vvdim_rep() -> list[CheckResult]:
    out = []
    worst_rel = 0
    worst_tr = 0
    for k1 in range(4, 41, 2):
        rep = vvdim.rho_matrices(k1)
        if not vvdim.check_relations(rep):
            worst_rel += 1
        tr = vvdim.trace_ST(k1)
        if tr != vvdim.legendre3(k1 - 1) or tr != vvdim.trace_ST_squared(k1):
            worst_tr += 1
        if tr != vvdim.trace_ST_sum_formula(k1):
            worst_tr += 1
    out.append(_result("rho(S)^2 = (rho(S)rho(T))^3 = I for k1 = 4..40", worst_rel, 0))
    out.append(_result("Tr rho(ST) = Tr rho(ST)^2 = (k1-1|3) for k1 = 4..40", worst_tr, 0))
    return out


def suite_vvdim_recurrence() -> list[CheckResult]:
    out = []
    direct = vvdim.legendre_seq(100)
    rec = vvdim.legendre_seq_recurrence(100)
    closed = vvdim.legendre_seq_closed(100)
    mism = sum(1 for a, b, c in zip(direct, rec, closed) if not (a == b == c))
    out.append(_result("a_n three-route agreement, n <= 100", mism, 0))
    worst = 0.0
    for k, (lhs, rhs) in vvdim.xi_identity_residuals(40).items():
        worst = max(worst, abs(lhs - rhs), abs(lhs.imag))
    out.append(_result("xi identity, even k <= 40", worst, 1e-12))
    return out


# ------------------------------------------------------------------- cocycle


def suite_cocycle() -> list[CheckResult]:
    f = _delta()
    k = f.k
    rng = random.Random(SEED)
    worst = 0.0
    for _ in range(50):
        g, d = _random_word(rng, 8), _random_word(rng, 8)
        lhs = periods.period_poly(f, g * d)
        part = act_poly(periods.period_poly(f, g), d, k)
        rhs = part + periods.period_poly(f, d)
        scale = max(1.0, lhs.norm_inf(), part.norm_inf())
        worst = max(worst, (lhs - rhs).norm_inf() / scale)
    out = [_result("r(gd) = r(g)|d + r(d), 50 random word pairs", worst, 1e-8)]

    rS = periods.period_poly(f, S)
    scale = rS.norm_inf()
    res_s2 = (act_poly(rS, S, k) + rS).norm_inf() / scale
    out.append(_result("r(S)|S + r(S) = 0", res_s2, 1e-8))
    st = S * T
    res_st3 = periods.period_poly(f, st * st * st).norm_inf() / scale
    out.append(_result("r((ST)^3) = 0", res_st3, 1e-8))

    r1 = periods.period_poly_base(f, S, "+", 1j)
    r2 = periods.period_poly_base(f, S, "+", 0.5 + 2j)
    res_base = (r1 - r2).norm_inf() / max(1.0, r1.norm_inf())
    out.append(_result("base-point independence of r(S)", res_base, 1e-9))
    return out


# ----------------------------------------------------------------- dualroute


def suite_lvalue_dualroute() -> list[CheckResult]:
    f = _delta()
    out = []
    worst = 0.0
    for s in range(7, 12):
        series = periods.twisted_L(f, s, 0, 1, method="series")
        extract = periods.twisted_L(f, s, 0, 1, method="extract")
        worst = max(worst, abs(series - extract) / abs(extract))
    out.append(_result("Lambda(s, 0) series vs extraction, s = 7..11", worst, 1e-7))

    table = periods.lambda_table(f, 2)
    worst = 0.0
    gammas = [periods.complete_row(c, d) for c, d in
              [(1, 0), (1, 1), (1, -1), (1, 2), (1, -2), (2, 1), (2, -1)]]
    for g in gammas:
        direct = periods.period_poly(f, g)
        rebuilt = periods.period_from_Lvalues(f, g, table)
        scale = max(1.0, direct.norm_inf())
        worst = max(worst, (direct - rebuilt).norm_inf() / scale)
    out.append(_result("period_from_Lvalues vs period_poly, c <= 2", worst, 1e-6))
    return out


def suite_coeff_closed_form() -> list[CheckResult]:
    """Coefficient functions by decomposition vs the closed two-term formula."""
    f = _delta()
    w = BiWeight(10, 10)
    z = 2j
    t = TruncationParams()
    phiv = raseries.phi(f, w, "+", z, t)
    vec = raseries.coeff_decompose(phiv.value, z, f.k)
    tails = max(phiv.tail_estimate, 1e-5)
    worst = 0.0
    per_j = {}
    for j in range(f.k - 1):
        closed = raseries.closed_form_phi_j(f, w, "+", j, z, t)
        res = abs(vec[j] - closed) / max(1.0, abs(closed))
        per_j[j] = res
        worst = max(worst, res)
    return [
        _result(
            "phi(j; z) decomposition vs closed form, j = 0..10",
            worst,
            tails,
            per_j={k: float(v) for k, v in per_j.items()},
        )
    ]


# ---------------------------------------------------------------- invariance


def suite_invariance() -> list[CheckResult]:
    f = _delta()
    w = BiWeight(10, 10)
    out = []
    for z in (2j, 0.5 + 2j):
        t = TruncationParams()
        for sign in "+-":
            sv = raseries.phi(f, w, sign, z, t)
            fn = lambda u, sg=sign: raseries.phi(f, w, sg, u, t).value
            acted = act_tensor(fn, S, w, f.k)(z)
            res = (acted - sv.value).norm_inf()
            tol = max(4 * sv.tail_estimate, 1e-5)
            out.append(
                _result(f"phi{sign} invariance under S at z = {z}", res, tol)
            )
    z = 2j
    base = raseries.phi(f, w, "+", z, TruncationParams())
    fine = raseries.phi(f, w, "+", z, TruncationParams(C=80, D=800))
    res = (base.value - fine.value).norm_inf()
    out.append(
        _result("phi self-convergence C: 40 -> 80", res, base.tail_estimate)
    )
    return out


# ------------------------------------------------- differential identities


def suite_phi_identities() -> list[CheckResult]:
    f = _delta()
    w = BiWeight(10, 10)
    z = 2j
    out = []
    coarse = {}
    for sign in "+-":
        res = maass.check_phi_identities(f, w, sign, z, TruncationParams(), maass.FDScheme())
        coarse[sign] = res
        out.append(_result(f"raising identity, {sign} case", res["raising"], 1e-4))
        out.append(_result(f"lowering identity, {sign} case", res["lowering"], 1e-4))
    fine = maass.check_phi_identities(
        f, w, "+", z, TruncationParams(C=80, D=800), maass.FDScheme(h=5e-4)
    )
    improved = max(fine.values()) < max(coarse["+"].values())
    out.append(
        _result(
            "identity residual decreases at (2C, h/2)",
            0.0 if improved else 1.0,
            0.0,
            coarse=coarse["+"],
            fine=fine,
        )
    )
    return out


def suite_coeffs_identity() -> list[CheckResult]:
    """Basis recombination identity, on synthetic data and composed with the
    differential identities on the actual coefficient functions."""
    import cmath

    f = _delta()
    w = BiWeight(10, 10)
    z = 2j
    t = TruncationParams()
    fjs = [
        (lambda a, b: (lambda u: complex(u).imag ** a * cmath.exp(2j * cmath.pi * b * complex(u))))(a, b)
        for (a, b) in [(1, 1), (0, 2), (2, 1), (1, 0), (0, 1)]
    ]
    res = maass.check_coeffs_identity(fjs, 4, 0.3 + 1.5j, 6)
    out = [_result("recombination identity on monomial data, k = 6", res, 1e-6)]

    k = f.k
    ev = raseries.eisenstein_rs(w, z, t).value
    fz = qforms.eval_form(f, z)
    vec_up = raseries.coeff_decompose(raseries.phi(f, w.raised(), "+", z, t).value, z, k)

    def coeff(j):
        return lambda u: complex(
            raseries.coeff_decompose(raseries.phi(f, w, "+", u, t).value, u, k)[j]
        )

    worst = 0.0
    for j in range(k - 1):
        lhs = maass.maass_d(coeff(j), w.r + j, z)
        lhs -= (j + 1) * (coeff(j + 1)(z) if j + 1 <= k - 2 else 0.0)
        rhs = w.r * vec_up[j]
        if j == k - 2:
            rhs = rhs + 2j * z.imag * fz * ev
        worst = max(worst, abs(lhs - rhs))
    out.append(
        _result(
            "derivative of each coefficient recombines as predicted", worst, 1e-3
        )
    )
    return out


def suite_equivariance() -> list[CheckResult]:
    f = _delta()
    ers = lambda z: raseries.eisenstein_rs(BiWeight(7, 7), z, TruncationParams()).value
    out = []
    res_t, res_y = maass.check_equivariance(ers, T, BiWeight(7, 7), 2j)
    out.append(_result("raising/slash equivariance under T", res_t, 1e-6))
    sv = raseries.eisenstein_rs(BiWeight(7, 7), 2j, TruncationParams())
    res_s, _ = maass.check_equivariance(ers, S, BiWeight(7, 7), 2j)
    out.append(
        _result(
            "raising/slash equivariance under S",
            res_s,
            max(1e-5, 4 * sv.tail_estimate),
        )
    )
    fd = lambda z: qforms.eval_form(f, z)
    _, res_comm = maass.check_equivariance(fd, T, BiWeight(12, 0), 2j, k_commute=2)
    out.append(_result("y^k commutation on Delta, k = 2", res_comm, 1e-7))
    return out


# ------------------------------------------------------------------- order n


def suite_order2() -> list[CheckResult]:
    f = _delta()
    data = it.IteratedIntegrand((f,))
    rep = it.order_check(data, 2, [S, S * T], (1j, 1 + 2j))
    worst = max(rep["residuals"].values())
    out = [_result("F2.(g-1) z-independence", worst, 1e-6)]
    val = rep["values"][S.entries]
    res = (val - periods.period_poly(f, S)).norm_inf()
    out.append(_result("F2.(S-1) equals r(S)", res, 1e-8))
    out.append(
        _result("F2.(T-1) = 0", it.parabolic_residual(data, 1.5j), 1e-9)
    )
    return out


def suite_order3() -> list[CheckResult]:
    f = _delta()
    data = it.IteratedIntegrand((f, f))
    rep = it.order_check(data, 3, [(S, S * T), (S, T_pow(1) * S)], (1j, 1 + 2j))
    worst = max(rep["residuals"].values())
    out = [_result("F3.(g-1).(d-1) z-independence", worst, 1e-5)]
    out.append(
        _result("F3.(T-1) = 0", it.parabolic_residual(data, 1.5j), 1e-9)
    )
    return out


# ---------------------------------------------------------------- 2nd order


def suite_second_order() -> list[CheckResult]:
    f = _delta()
    w = BiWeight(10, 10)
    z = 2j
    t = TruncationParams()
    out = []
    for g, label in ((S, "S"), (T * S, "TS")):
        sv = raseries.psi_series(f, w, "+", z, t)
        fn = lambda u: raseries.psi_series(f, w, "+", u, t).value
        image = act_tensor(fn, g, w, f.k)(z) - sv.value
        ev = raseries.eisenstein_rs(w, z, t)
        predicted = periods.period_poly(f, g) * (-ev.value)
        res = (image - predicted).norm_inf()
        tol = max(2 * sv.tail_estimate + abs(ev.tail_estimate), 1e-5)
        out.append(_result(f"psi.(g-1) + r(g) E = 0, g = {label}", res, tol))

    # second-order Poincare-type law at (n, k, k1) = (1, 16, 12)
    n, k = 1, 16
    sv = raseries.second_order_G(n, f, k, z, t, "+")
    fn = lambda u: raseries.second_order_G(n, f, k, u, t, "+").value
    image = act_tensor(fn, S, BiWeight(k, 0), f.k)(z) - sv.value
    pn = raseries.poincare(n, k, z, t)
    predicted = periods.period_poly(f, S) * (-pn.value)
    res = (image - predicted).norm_inf()
    tol = max(4 * sv.tail_estimate + abs(pn.tail_estimate), 1e-5)
    out.append(_result("G.(S-1) + r(S) P_n = 0 at (1,16,12)", res, tol))

    # real-analytic F2 cocycle
    fn2 = it.real_F2_fn(f, w, t)
    image = act_tensor(fn2, S, w, f.k)(z) - fn2(z)
    ev = raseries.eisenstein_rs(w, z, t)
    predicted = periods.period_poly(f, S) * ev.value
    res = (image - predicted).norm_inf()
    tol = max(4 * ev.tail_estimate * periods.period_poly(f, S).norm_inf(), 1e-5)
    out.append(_result("real F2.(S-1) = E r(S)", res, tol))
    return out


def suite_psibar() -> list[CheckResult]:
    f = _delta()
    w = BiWeight(10, 10)
    z = 2j
    t = TruncationParams()
    rep = it.psi_bar_image(f, f, w, S, z, t)
    out = [
        _result(
            "psi-bar image: series vs closed form, g = S",
            rep["discrepancy"],
            max(1e-5, 4 * raseries.psi_series(f, w, "+", z, t).tail_estimate),
        )
    ]
    # cocycle property of the closed-form image over (S, TS)
    g, d = S, T * S
    lhs = it.psi_bar_closed(f, f, w, g * d, z, t)
    rhs = act_poly(it.psi_bar_closed(f, f, w, g, z, t), d, f.k) + it.psi_bar_closed(
        f, f, w, d, z, t
    )
    res = (lhs - rhs).norm_inf() / max(1.0, lhs.norm_inf())
    out.append(_result("psi-bar cocycle over (S, TS)", res, 1e-5))
    return out


# ------------------------------------------------------------------- fourier


def suite_fourier() -> list[CheckResult]:
    """Fourier-expansion shape of the second-order coefficient functions.

    The invariant phi-coefficients carry modes P_l(y) e^(-2 pi l y), checked
    two-sided against the allowed polynomial window; the psi-coefficient
    modes decay at least that fast (their leading mode content vanishes at
    these weights, so only the one-sided bound is meaningful).
    """
    f = _delta()
    w = BiWeight(10, 10)
    t = TruncationParams()
    out = []
    B = 12.0
    M = 96

    def coeff_fn(i: int, second_order: bool):
        def fn(z: complex) -> complex:
            if second_order:
                val = raseries.psi_series(f, w, "+", z, t).value
            else:
                val = raseries.phi(f, w, "+", z, t).value
            return complex(raseries.coeff_decompose(val, z, f.k)[i])

        return fn

    for l in (1, 2):
        decay = math.exp(-2 * math.pi * l * 0.5)
        phi_fn = coeff_fn(f.k - 2, second_order=False)
        ratio = abs(raseries.fourier_coefficient(phi_fn, l, 1.5, M)) / abs(
            raseries.fourier_coefficient(phi_fn, l, 1.0, M)
        )
        inside = decay * 1.5**-B <= ratio <= decay * 1.5**B
        out.append(
            _result(
                f"phi-coefficient mode l = {l} in decay window",
                0.0 if inside else 1.0,
                0.0,
                ratio=ratio,
                window=(decay * 1.5**-B, decay * 1.5**B),
            )
        )
        psi_fn = coeff_fn(0, second_order=True)
        ratio = abs(raseries.fourier_coefficient(psi_fn, l, 1.5, M)) / abs(
            raseries.fourier_coefficient(psi_fn, l, 1.0, M)
        )
        out.append(
            _result(
                f"psi-coefficient mode l = {l} decays at least as e^(-2 pi l dy)",
                ratio,
                decay * 1.5**B,
                ratio=ratio,
            )
        )
    neg = raseries.fourier_coefficient(lambda z: qforms.eval_form(f, z), -1, 1.0, 128)
    out.append(_result("Delta negative Fourier mode vanishes", abs(neg), 1e-12))
    return out


SUITES = {
    "vvdim": lambda: suite_vvdim_dims() + suite_vvdim_rep() + suite_vvdim_recurrence(),
    "cocycle": suite_cocycle,
    "dualroute": lambda: suite_lvalue_dualroute() + suite_coeff_closed_form(),
    "invariance": suite_invariance,
    "keypr": suite_phi_identities,
    "coeffs": suite_coeffs_identity,
    "equivariance": suite_equivariance,
    "order2": suite_order2,
    "order3": suite_order3,
    "psibar": suite_psibar,
    "secondorder": suite_second_order,
    "fourier": suite_fourier,
}


def run_suite(name: str) -> list[CheckResult]:
    if name == "all":
        results = []
        for fn in SUITES.values():
            results.extend(fn())
        return results
    if name not in SUITES:
        raise KeyError(f"unknown suite {name!r}; choose from {sorted(SUITES)} or 'all'")
    return SUITES[name]()

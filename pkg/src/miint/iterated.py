"""Iterated Eichler integrals of depth <= 3, higher-order invariance checks,
images of the psi-type cocycles, and the map sending a second-order series to
its vector of invariant basis coefficients.

Depth 3 is evaluated by expanding the inner integral into exponential
primitives, multiplying by the outer q-series and integrating term by term;
no shuffle-product machinery is needed at this depth.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import ConvergenceError
from .group import (
    BiWeight,
    GroupElement,
    PolyC,
    T,
    T_pow,
    act_poly,
    act_poly_matrix,
    act_tensor,
    jfactor,
    mobius,
)
from .periods import _exp_poly_primitive_row, eichler_F, period_poly
from .qforms import QExpansion, Y_MIN
from .raseries import (
    TruncationParams,
    coeff_decompose,
    eisenstein_rs,
    phi,
    psi_series,
)


@dataclass(frozen=True)
class IteratedIntegrand:
    """Ordered cusp-form data (f_1, ..., f_{n-1}) plus the outer weight."""

    forms: tuple[QExpansion, ...]
    k0: int = 2

    def __post_init__(self):
        if len(self.forms) > 2:
            raise ValueError("depth capped at n = 3 (two integrand forms)")
        for f in self.forms:
            if f.k % 2 != 0 or not f.is_cusp:
                raise ValueError("integrand forms must be even-weight cusp forms")

    @property
    def depth(self) -> int:
        return len(self.forms) + 1

    @property
    def weights(self) -> tuple[int, ...]:
        return (self.k0,) + tuple(f.k for f in self.forms)


class Poly2:
    """Polynomial in two formal variables, coefficients[v, u] of X1^v X2^u."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs):
        self.coeffs = np.asarray(coeffs, dtype=np.complex128)

    def __add__(self, other: "Poly2") -> "Poly2":
        return Poly2(self.coeffs + other.coeffs)

    def __sub__(self, other: "Poly2") -> "Poly2":
        return Poly2(self.coeffs - other.coeffs)

    def __mul__(self, scalar) -> "Poly2":
        return Poly2(self.coeffs * complex(scalar))

    __rmul__ = __mul__

    def act(self, g: GroupElement, k1: int, k2: int) -> "Poly2":
        M1 = act_poly_matrix(g, k1)
        M2 = act_poly_matrix(g, k2)
        return Poly2(M1 @ self.coeffs @ M2.T)

    def norm_inf(self) -> float:
        return float(np.max(np.abs(self.coeffs)))

    def __call__(self, x1: complex, x2: complex) -> complex:
        v1 = np.array([x1**v for v in range(self.coeffs.shape[0])])
        v2 = np.array([x2**u for u in range(self.coeffs.shape[1])])
        return complex(v1 @ self.coeffs @ v2)


def _depth3_value(f1: QExpansion, f2: QExpansion, z: complex) -> Poly2:
    """Coefficients of the depth-3 iterated integral at z.

    Inner integral: F_2(w; X2) = sum_n a2(n) e^(2 pi i n w) Q_n(w; X2) with
    Q_n from the exponential-primitive recurrence; the outer integral then
    reduces to primitives at shifted frequencies.
    """
    z = complex(z)
    m1, m2 = f1.k - 2, f2.k - 2
    N1, N2 = f1.N, f2.N
    tau_max = m1 + m2
    # primitives I_tau(N; z) for all frequencies reachable as m + n
    I_arr = np.zeros((N1 + N2 + 1, tau_max + 1), dtype=np.complex128)
    for N in range(2, N1 + N2 + 1):
        I_arr[N] = _exp_poly_primitive_row(N, tau_max, z)
    a1 = np.array([complex(c) for c in f1.coeffs], dtype=np.complex128)
    a2 = np.array([complex(c) for c in f2.coeffs], dtype=np.complex128)
    # J[tau, n] = sum_m a1(m) I_tau(m + n; z)
    J = np.zeros((tau_max + 1, N2 + 1), dtype=np.complex128)
    for n in range(1, N2 + 1):
        J[:, n] = a1[1:] @ I_arr[n + 1 : n + N1 + 1, :]
    # Q_n[t, u]: w^t X2^u coefficients of the inner polynomial part
    Q = np.zeros((N2 + 1, m2 + 1, m2 + 1), dtype=np.complex128)
    for n in range(1, N2 + 1):
        if a2[n] == 0:
            continue
        cinv = 1.0 / (2j * math.pi * n)
        pis = [np.array([cinv], dtype=np.complex128)]  # pi_0
        for mdeg in range(1, m2 + 1):
            prev = pis[-1]
            cur = np.zeros(mdeg + 1, dtype=np.complex128)
            cur[mdeg] = cinv
            cur[: prev.size] -= mdeg * cinv * prev
            pis.append(cur)
        for ju in range(m2 + 1):
            coef = math.comb(m2, ju) * (-1) ** (m2 - ju)
            Q[n, : ju + 1, m2 - ju] += coef * pis[ju]
        Q[n] *= a2[n]
    out = np.zeros((m1 + 1, m2 + 1), dtype=np.complex128)
    for v in range(m1 + 1):
        e = m1 - v
        # sum_n sum_t Q[n, t, u] J[e + t, n]
        out[v] = math.comb(m1, v) * (-1) ** v * np.einsum(
            "ntu,tn->u", Q[1:], J[e : e + m2 + 1, 1:]
        )
    return Poly2(out)


def iterated_F(data: IteratedIntegrand, z: complex):
    """Iterated Eichler integral of depth n at z: 1 for n = 1, the classical
    Eichler integral for n = 2, and the nested expansion for n = 3.

    The real part is translated into [-1/2, 1/2] first and the formal
    variables shifted back (exact, by parabolic invariance); this keeps the
    exponential-primitive sums well conditioned at every x.
    """
    z = complex(z)
    if z.imag < Y_MIN:
        raise ValueError(f"Im z = {z.imag} below evaluation floor {Y_MIN}")
    n = data.depth
    if n == 1:
        return 1.0 + 0j
    shift = round(z.real)
    z0 = z - shift
    if n == 2:
        val = eichler_F(data.forms[0], z0, "+")
        if shift:
            val = act_poly(val, T_pow(-shift), data.forms[0].k)
        return val
    val = _depth3_value(data.forms[0], data.forms[1], z0)
    if shift:
        val = val.act(T_pow(-shift), data.forms[0].k, data.forms[1].k)
    return val


def dot_action(F, g: GroupElement, weights: tuple[int, ...]):
    """Multi-variable right action on a function-valued family: substitute
    gz and gX_i, multiply j(g,z)^(k0-2) and the polynomial factors."""
    k0 = weights[0]

    def acted(z: complex):
        z = complex(z)
        val = F(mobius(g, z))
        jz = jfactor(g, z) ** (k0 - 2)
        if isinstance(val, Poly2):
            return val.act(g, weights[1], weights[2]) * jz
        if isinstance(val, PolyC):
            return act_poly(val, g, weights[1]) * jz
        return val * jz

    return acted


def _norm(val) -> float:
    if isinstance(val, (Poly2, PolyC)):
        return val.norm_inf()
    return abs(val)


def _image_fn(F, g: GroupElement, weights):
    acted = dot_action(F, g, weights)
    return lambda z: acted(z) - F(z)


def order_check(
    data: IteratedIntegrand,
    n: int,
    witnesses: list,
    zpair: tuple[complex, complex] = (1j, 1 + 2j),
) -> dict:
    """Higher-order membership via z-independence of group images.

    n = 2: F.(g-1) must not depend on z (constants tensor polynomials).
    n = 3: the recursive condition; F.(g-1) lands in order-2 objects
    tensored with the inert X2 slot, so each X2-coefficient of F.(g-1),
    as a polynomial-valued function of (z, X1), must pass the order-2
    test against the second witness.  Report-only: returns residuals,
    never raises on failure.
    """
    if n not in (2, 3):
        raise ValueError("order_check supports n = 2 or 3")
    weights = data.weights
    F = lambda z: iterated_F(data, z)
    z1, z2 = (complex(z) for z in zpair)
    report = {"n": n, "residuals": {}, "values": {}}
    if n == 2:
        for g in witnesses:
            diff = _image_fn(F, g, weights)
            v1, v2 = diff(z1), diff(z2)
            scale = max(1.0, _norm(v1))
            report["residuals"][g.entries] = _norm(v1 - v2) / scale
            report["values"][g.entries] = v1
        return report
    k2 = data.forms[1].k
    for g, d in witnesses:
        first = _image_fn(F, g, weights)
        worst = 0.0
        for u in range(k2 - 1):

            def slot(z: complex, u=u) -> PolyC:
                return PolyC(first(z).coeffs[:, u], data.forms[0].k - 2)

            diff = _image_fn(slot, d, weights[:2])
            v1, v2 = diff(z1), diff(z2)
            worst = max(worst, (v1 - v2).norm_inf() / max(1.0, v1.norm_inf()))
        report["residuals"][(g.entries, d.entries)] = worst
        report["values"][(g.entries, d.entries)] = first(z1)
    return report


def parabolic_residual(data: IteratedIntegrand, z: complex) -> float:
    """Sup-norm of F.(T-1) at z; vanishes for every iterated integral."""
    F = lambda u: iterated_F(data, u)
    return _norm(_image_fn(F, T, data.weights)(complex(z)))


def real_iterated_F2(
    f1: QExpansion,
    w: BiWeight,
    z: complex,
    t: TruncationParams = TruncationParams(),
) -> PolyC:
    """Real-analytic iterated integral E_{r,s}(z) * (Eichler integral of f1);
    its (g-1)-image is E_{r,s} r_{f1}(g; X)."""
    if w.r + w.s <= 2:
        raise ConvergenceError("needs r + s > 2")
    z = complex(z)
    return eisenstein_rs(w, z, t).value * eichler_F(f1, z, "+")


def real_F2_fn(f1: QExpansion, w: BiWeight, t: TruncationParams = TruncationParams()):
    return lambda z: real_iterated_F2(f1, w, z, t)


def psi_bar_image(
    fplus: QExpansion,
    gminus: QExpansion,
    w: BiWeight,
    g: GroupElement,
    z: complex,
    t: TruncationParams = TruncationParams(),
) -> dict:
    """(psi^+_f + psi^-_g).(g-1) by direct series difference and by the closed
    form -(r^+_f(g) + r^-_g(g)) E_{r,s}(z); returns both plus the discrepancy.
    """
    if fplus.k != gminus.k:
        raise ValueError("both forms must share one weight")
    k = fplus.k
    if w.r + w.s <= k:
        raise ConvergenceError(f"needs r + s > k = {k}")
    z = complex(z)

    def combined(u: complex) -> PolyC:
        return (
            psi_series(fplus, w, "+", u, t).value
            + psi_series(gminus, w, "-", u, t).value
        )

    acted = act_tensor(combined, g, w, k)
    direct = acted(z) - combined(z)
    ev = eisenstein_rs(w, z, t).value
    closed = (period_poly(fplus, g, "+") + period_poly(gminus, g, "-")) * (-ev)
    disc = (direct - closed).norm_inf()
    return {"direct": direct, "closed": closed, "discrepancy": float(disc)}


def psi_bar_closed(
    fplus: QExpansion,
    gminus: QExpansion,
    w: BiWeight,
    g: GroupElement,
    z: complex,
    t: TruncationParams = TruncationParams(),
) -> PolyC:
    """Closed-form cocycle value -(r^+_f(g) + r^-_g(g)) E_{r,s}(z)."""
    ev = eisenstein_rs(w, complex(z), t).value
    return (period_poly(fplus, g, "+") + period_poly(gminus, g, "-")) * (-ev)


def map_to_MI(
    hform: QExpansion,
    w: BiWeight,
    sign: str,
    z: complex,
    t: TruncationParams = TruncationParams(),
) -> np.ndarray:
    """Invariant coefficient vector (phi(0; z), ..., phi(k-2; z)) of the
    second-order series attached to hform."""
    if w.r + w.s <= hform.k:
        raise ConvergenceError(f"needs r + s > k = {hform.k}")
    phiv = phi(hform, w, sign, complex(z), t)
    return coeff_decompose(phiv.value, complex(z), hform.k)

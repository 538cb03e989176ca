"""Eichler integrals, period polynomials and additively twisted L-values.

The period cocycle is anchored at a single high-accuracy value r(S) computed
from the Eichler integral at the fixed point i of S; every other period
polynomial flows through the cocycle relation over a word decomposition in
S and T-powers, so no evaluation ever happens at small imaginary part.
"""

from __future__ import annotations

import cmath
import math
from functools import lru_cache

import numpy as np

from .errors import ConvergenceError, PrecisionError
from .group import (
    IDENTITY,
    GroupElement,
    PolyC,
    S,
    T_pow,
    act_poly,
    complete_row,
    mobius,
    word_decompose,
)
from .qforms import QExpansion, Y_MIN, eval_form_anywhere, eval_tail_bound

TWO_PI = 2.0 * math.pi

_I_POW = (1 + 0j, 1j, -1 + 0j, -1j)


def i_power(m: int) -> complex:
    """Exact i^m as one of {1, i, -1, -i}."""
    return _I_POW[m % 4]


def exp_poly_primitive(n: int, m: int, z: complex) -> complex:
    """Primitive of e^(2 pi i n w) w^m vanishing at i*infinity, evaluated at z.

    Recurrence: I_m = e^(2 pi i n z) z^m / (2 pi i n) - (m / (2 pi i n)) I_{m-1}.
    """
    if n < 1 or m < 0:
        raise ValueError("need n >= 1, m >= 0")
    z = complex(z)
    if z.imag <= 0:
        raise ValueError("z must lie in the upper half-plane")
    c = 1.0 / (2j * math.pi * n)
    e = cmath.exp(2j * math.pi * n * z)
    acc = e * c  # I_0
    zp = 1.0 + 0j
    for t in range(1, m + 1):
        zp *= z
        acc = e * zp * c - t * c * acc
    return acc if m > 0 else e * c


def _exp_poly_primitive_row(n: int, mmax: int, z: complex) -> np.ndarray:
    """I_0..I_mmax for one frequency, sharing the recurrence."""
    c = 1.0 / (2j * math.pi * n)
    e = cmath.exp(2j * math.pi * n * complex(z))
    out = np.empty(mmax + 1, dtype=np.complex128)
    out[0] = e * c
    zp = 1.0 + 0j
    for t in range(1, mmax + 1):
        zp *= z
        out[t] = e * zp * c - t * c * out[t - 1]
    return out


def integral_f_wpoly(f: QExpansion, wcoeffs, z: complex) -> complex:
    """Integral from i*infinity to z of f(w) * P(w) dw for a polynomial P
    given by ascending coefficients, termwise over the q-expansion."""
    wcoeffs = np.asarray(wcoeffs, dtype=np.complex128)
    mmax = wcoeffs.size - 1
    total = 0j
    for n in range(1, f.N + 1):
        an = f.coeffs[n]
        if an == 0:
            continue
        row = _exp_poly_primitive_row(n, mmax, z)
        total += complex(an) * complex(row @ wcoeffs)
    return total


def eichler_F(f: QExpansion, z: complex, sign: str = "+", tol: float | None = None) -> PolyC:
    """Eichler integral from i*infinity to z of f(w)(w - X)^(k-2) dw as a
    polynomial in X; the minus version conjugates the coefficients."""
    if not f.is_cusp:
        raise ValueError("Eichler integrals require a cusp form")
    z = complex(z)
    if z.imag < Y_MIN:
        raise PrecisionError(f"Im z = {z.imag} below evaluation floor {Y_MIN}")
    if tol is not None and eval_tail_bound(f, z.imag) / (2 * math.pi) > tol:
        raise PrecisionError("q-series tail at z exceeds the requested tolerance")
    k = f.k
    m = k - 2
    # (w - X)^m = sum_j binom(m, j) (-X)^(m-j) w^j
    mono = np.zeros(m + 1, dtype=np.complex128)
    rows = np.zeros((f.N + 1, m + 1), dtype=np.complex128)
    for n in range(1, f.N + 1):
        if f.coeffs[n] != 0:
            rows[n] = _exp_poly_primitive_row(n, m, z) * complex(f.coeffs[n])
    wints = rows.sum(axis=0)  # integral of f(w) w^j dw, j = 0..m
    for j in range(m + 1):
        mono[m - j] += math.comb(m, j) * (-1) ** (m - j) * wints[j]
    P = PolyC(mono, m)
    if sign == "-":
        return P.conjugate()
    if sign != "+":
        raise ValueError("sign must be '+' or '-'")
    return P


def period_poly_base(f: QExpansion, g: GroupElement, sign: str = "+", z0: complex = 1j) -> PolyC:
    """Period polynomial via the base-point formula
    r(g; X) = F(g z0, g X) j(g, X)^(k-2) - F(z0, X), independent of z0."""
    z0 = complex(z0)
    gz0 = mobius(g, z0)
    if z0.imag < Y_MIN or gz0.imag < Y_MIN:
        raise PrecisionError("base point or its image lies below the evaluation floor")
    F_at_gz0 = eichler_F(f, gz0, "+")
    val = act_poly(F_at_gz0, g, f.k) - eichler_F(f, z0, "+")
    return val.conjugate() if sign == "-" else val


class PeriodCocycle:
    """Period cocycle of a cusp form: r(T) = 0, r(S) anchored numerically,
    everything else assembled through r(gd) = r(g)|d + r(d)."""

    def __init__(self, f: QExpansion, sign: str = "+"):
        self.f = f
        self.k = f.k
        self.sign = sign
        self.r_S = period_poly_base(f, S, sign, 1j)

    def of_word(self, word: list[tuple[str, int]]) -> PolyC:
        acc = PolyC.zero(self.k - 2)
        suffix = IDENTITY
        for kind, n in reversed(word):
            if kind == "S":
                acc = acc + act_poly(self.r_S, suffix, self.k)
                suffix = S * suffix
            else:
                suffix = T_pow(n) * suffix
        return acc

    def of_gamma(self, g: GroupElement) -> PolyC:
        return self.of_word(word_decompose(g))


@lru_cache(maxsize=8)
def _cocycle_for(f: QExpansion, sign: str) -> PeriodCocycle:
    return PeriodCocycle(f, sign)


def period_poly(f: QExpansion, g: GroupElement, sign: str = "+") -> PolyC:
    """Period polynomial for arbitrary g via the cocycle route."""
    return _cocycle_for(f, sign).of_gamma(g)


def period_error_estimate(f: QExpansion, g: GroupElement, sign: str = "+") -> float:
    """Rough forward-error estimate for the cocycle route: roundoff at the
    anchor propagated through the word, plus the anchor's own q-tail."""
    poly = period_poly(f, g, sign)
    steps = len(word_decompose(g)) + 1
    anchor_tail = eval_tail_bound(f, 1.0) / (2 * math.pi)
    return 32 * 2.220446049250313e-16 * steps * max(1.0, poly.norm_inf()) + anchor_tail


# ---------------------------------------------------------------------------
# additively twisted completed L-values
# ---------------------------------------------------------------------------


def _upper_incomplete_gamma_int(s: int, x: float) -> float:
    """Gamma(s, x) for integer s >= 1: (s-1)! e^-x sum_{t<s} x^t/t!."""
    acc = 0.0
    term = 1.0
    for t in range(s):
        if t:
            term *= x / t
        acc += term
    return math.factorial(s - 1) * math.exp(-x) * acc


@lru_cache(maxsize=4)
def _gauss_legendre(n: int):
    x, w = np.polynomial.legendre.leggauss(n)
    return x, w


def series_convergent(f: QExpansion, s: int) -> bool:
    """Absolute convergence range of the Dirichlet series under the divisor
    bound |a(n)| <= d(n) n^((k-1)/2)."""
    return s > (f.k + 1) / 2


def twisted_L(
    f: QExpansion,
    s: int,
    p: int,
    q: int = 1,
    method: str = "auto",
    tol: float | None = None,
) -> complex:
    """Completed additively twisted L-value
    Lambda_f(s, p/q) = Gamma(s) (2 pi)^(-s) sum_n a(n) e^(2 pi i n p/q) / n^s.

    The 'series' method evaluates the equivalent vertical-line integral
    int_0^inf f(p/q + ix) x^(s-1) dx by panel Gauss-Legendre quadrature plus
    an incomplete-gamma tail; it is only admitted in the absolute-convergence
    range s > (k+1)/2.  The 'extract' method reads the value off a period
    polynomial and works for every s in 1..k-1.
    """
    if s < 1:
        raise ValueError("s must be a positive integer")
    if q < 1 or math.gcd(p, q) != 1:
        raise ValueError("need q >= 1 and gcd(p, q) = 1")
    p = p % q if q > 1 else 0
    if method == "auto":
        method = "series" if series_convergent(f, s) else "extract"
    if method == "extract":
        if not 1 <= s <= f.k - 1:
            raise ValueError("extraction is defined for s in 1..k-1")
        return _lambda_by_extraction(f, s, p, q)
    if method != "series":
        raise ValueError(f"unknown method {method!r}")
    if not series_convergent(f, s):
        raise ConvergenceError(
            f"series method needs s > (k+1)/2 = {(f.k + 1) / 2}, got s = {s}"
        )
    return _lambda_by_integral(f, s, p, q, tol=tol)


def _lambda_by_integral(f: QExpansion, s: int, p: int, q: int, tol=None) -> complex:
    x0 = p / q
    # tail over [1, inf): termwise incomplete gamma against the q-expansion
    tail = 0j
    for n in range(1, f.N + 1):
        an = f.coeffs[n]
        if an == 0:
            continue
        tw = cmath.exp(2j * math.pi * n * x0)
        tail += complex(an) * tw * _upper_incomplete_gamma_int(s, TWO_PI * n) / (TWO_PI * n) ** s
    # [x_lo, 1] by geometric panels; integrand analytic, GL converges fast
    x_lo = 1e-5 / (q * q)
    nodes, weights = _gauss_legendre(24)
    total = 0j
    lo = x_lo
    while lo < 1.0:
        hi = min(1.0, 2.0 * lo)
        mid, half = 0.5 * (hi + lo), 0.5 * (hi - lo)
        for xi, wi in zip(nodes, weights):
            x = mid + half * xi
            total += wi * half * eval_form_anywhere(f, complex(x0, x)) * x ** (s - 1)
        lo = hi
    # neglected [0, x_lo]: cusp decay (q x)^(-k) e^(-2 pi/(q^2 x)) collapses it
    neglect = (q * x_lo) ** (-f.k) * math.exp(-TWO_PI / (q * q * x_lo)) * x_lo**s
    if tol is not None and neglect > tol:
        raise PrecisionError("neglected near-cusp piece exceeds tolerance")
    return total + tail


def _lambda_by_extraction(f: QExpansion, s: int, p: int, q: int) -> complex:
    """Lambda_f(s, p/q) from the Taylor expansion of a period polynomial.

    With bottom row (c, d) = (q, -p) the matrix sends the cusp p/q to
    i*infinity and r(g; X) = sum_j (-1)^j binom(k-2, j) i^(j+1)
    Lambda_f(j+1, p/q) (X - p/q)^(k-2-j).
    """
    k = f.k
    j = s - 1
    if q == 1:
        g = S if p == 0 else complete_row(1, -p)
    else:
        g = complete_row(q, -p)
    rpoly = period_poly(f, g, "+")
    a = p / q
    taylor = rpoly.shift(a)  # coefficients of (X - a)^t ... shift X -> X + a
    coeff = taylor.coeffs[k - 2 - j]
    return coeff * (-1) ** j / (math.comb(k - 2, j) * i_power(j + 1))


class LambdaTable:
    """Immutable cache of Lambda_f(s, -d/c) for all c <= C, d mod c coprime,
    s = 1..k-1, built by period-polynomial extraction in a single pass."""

    def __init__(self, f: QExpansion, C: int, sign: str = "+"):
        self.f = f
        self.C = C
        self.k = f.k
        cocycle = _cocycle_for(f, "+")
        tab: dict[tuple[int, int], np.ndarray] = {}
        for c in range(1, C + 1):
            for d in range(c):
                if math.gcd(c, d) != 1:
                    continue
                g = S if (c, d) == (1, 0) else complete_row(c, d)
                taylor = cocycle.of_gamma(g).shift(-d / c)
                vals = np.empty(self.k - 1, dtype=np.complex128)
                for j in range(self.k - 1):
                    vals[j] = (
                        taylor.coeffs[self.k - 2 - j]
                        * (-1) ** j
                        / (math.comb(self.k - 2, j) * i_power(j + 1))
                    )
                tab[(c, d)] = vals
        self._tab = tab

    def value(self, s: int, c: int, d: int) -> complex:
        """Lambda_f(s, -d/c); the twist is looked up modulo c."""
        if not 1 <= s <= self.k - 1:
            raise KeyError(f"s = {s} outside 1..{self.k - 1}")
        key = (c, d % c)
        if key not in self._tab:
            raise KeyError(f"Lambda table does not cover (c, d) = ({c}, {d})")
        return complex(self._tab[key][s - 1])

    def row(self, s: int, cs: np.ndarray, ds: np.ndarray) -> np.ndarray:
        """Vectorised lookup of Lambda_f(s, -d/c) over coset arrays."""
        out = np.empty(cs.size, dtype=np.complex128)
        for i, (c, d) in enumerate(zip(cs, ds)):
            out[i] = self._tab[(int(c), int(d) % int(c))][s - 1]
        return out


@lru_cache(maxsize=4)
def lambda_table(f: QExpansion, C: int) -> LambdaTable:
    return LambdaTable(f, C)


def period_from_Lvalues(f: QExpansion, g: GroupElement, table: LambdaTable) -> PolyC:
    """Reassemble r(g; X) from twisted L-values:
    sum_j (-1)^j binom(k-2,j) i^(j+1) Lambda_f(j+1, g^(-1) inf) (X - a)^(k-2-j).
    """
    k = f.k
    if g.c == 0:
        return PolyC.zero(k - 2)  # cusp fixed, empty integral
    c, d = (g.c, g.d) if g.c > 0 else (-g.c, -g.d)
    a = -d / c
    taylor = np.zeros(k - 1, dtype=np.complex128)
    for j in range(k - 1):
        lam = table.value(j + 1, c, d)
        taylor[k - 2 - j] = (-1) ** j * math.comb(k - 2, j) * i_power(j + 1) * lam
    return PolyC(taylor, k - 2).shift(-a)  # (X - a)-basis back to monomials


def convexity_spotcheck(f: QExpansion, jrange=None, qmax: int = 10) -> dict:
    """Soft growth check of q^(j+1) |Lambda_f(j+1, p/q)| against q^(k-1+0.1).

    Reports the max ratio per q; flags (never fails) if the ratio table stops
    being bounded by a fixed multiple of its small-q values.
    """
    k = f.k
    if jrange is None:
        jrange = range(k - 1)
    table = lambda_table(f, qmax)
    ratios = {}
    for q in range(1, qmax + 1):
        worst = 0.0
        for p in range(q):
            if math.gcd(p, q) != 1:
                continue
            for j in jrange:
                lam = table.value(j + 1, q, -p)  # -d/c = p/q
                worst = max(worst, q ** (j + 1) * abs(lam) / q ** (k - 1 + 0.1))
        ratios[q] = worst
    base = max(ratios[q] for q in ratios if q <= max(2, qmax // 2))
    flag = any(v > 4.0 * base for v in ratios.values())
    return {"ratios": ratios, "bounded": not flag}

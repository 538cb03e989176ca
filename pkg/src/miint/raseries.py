"""Truncated coset sums over B\\Gamma: real-analytic Eisenstein series, the
second-order series psi/phi attached to a cusp form, their coefficient
decompositions and closed-form cross-checks, Fourier extraction, twisted
Kloosterman-type sums, Poincare series and the second-order G series.

Summation order is fixed (ascending c, ascending |d|, positive d first) and
reductions are exactly rounded, so identical inputs give bitwise-identical
results regardless of chunking.

Every series value carries a tail estimate: an integral-comparison bound on
the truncated part, with its constant read off the outermost computed shells
(averaged over the last few values of c to smooth totient fluctuations),
plus a floating-point noise floor.  It is an estimate, not a proof-grade
bound, but it is sized so that doubling the rectangle moves the value by
less than it.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .errors import ConvergenceError, PrecisionError
from .group import (
    BiWeight,
    PolyC,
    S,
    act_poly,
    complete_row,
    enumerate_coset_rows,
    enumerate_cosets,
    jfactor,
    mobius,
)
from .periods import (
    LambdaTable,
    _cocycle_for,
    eichler_F,
    i_power,
    integral_f_wpoly,
    lambda_table,
)
from .qforms import QExpansion, Y_MIN, eval_tail_bound
from .summation import fsum_complex, fsum_complex_chunked

_EPS = float(np.finfo(np.float64).eps)


@dataclass(frozen=True)
class TruncationParams:
    """Deterministic truncation of coset sums and discretisations."""

    C: int = 40
    D: int = 400
    N: int = 120
    M: int = 128
    h: float = 1e-3
    tol: float = 1e-6

    def __post_init__(self):
        if self.C < 1 or self.D < 1:
            raise ValueError("C and D must be >= 1")

    def validate_at(self, z: complex) -> None:
        need = 4 * self.C * (abs(complex(z).real) + 1.0)
        if self.D < need:
            raise ValueError(
                f"d-cutoff too small at x = {complex(z).real}: need D >= {need}, got {self.D}"
            )

    def scaled(self, factor: int) -> "TruncationParams":
        return TruncationParams(
            self.C * factor, self.D * factor, self.N, self.M, self.h, self.tol
        )


@dataclass
class SeriesValue:
    """Evaluated series (polynomial or scalar) plus truncation metadata."""

    value: object  # PolyC or complex
    weights: BiWeight
    sign: str
    trunc: TruncationParams
    tail_estimate: float


@dataclass(frozen=True)
class _CosetData:
    cs: np.ndarray
    ds: np.ndarray
    as_: np.ndarray
    bs: np.ndarray


@lru_cache(maxsize=8)
def _coset_data(C: int, D: int) -> _CosetData:
    cs, ds = enumerate_coset_rows(C, D)
    as_ = np.empty(cs.size, dtype=np.int64)
    bs = np.empty(cs.size, dtype=np.int64)
    for i, (c, d) in enumerate(zip(cs, ds)):
        g = complete_row(int(c), int(d))
        as_[i], bs[i] = g.a, g.b
    return _CosetData(cs, ds, as_, bs)


@lru_cache(maxsize=6)
def _period_table(f: QExpansion, C: int, D: int) -> np.ndarray:
    """Plus-sign period polynomials r(gamma; X) for every coset in the fixed
    order, shape (n_cosets, k-1).

    Reduced representatives (c, d0 mod c) go through the cocycle; the rest of
    each congruence class is filled by the exact translation action
    r(gamma T^n) = r(gamma)|T^n, vectorised as a Vandermonde product.
    """
    data = _coset_data(C, D)
    cocycle = _cocycle_for(f, "+")
    K = f.k - 1
    pos: dict[tuple[int, int], int] = {
        (int(c), int(d)): i for i, (c, d) in enumerate(zip(data.cs, data.ds))
    }
    R = np.empty((data.cs.size, K), dtype=np.complex128)
    comb = np.zeros((K, K))
    for t in range(K):
        for u in range(t, K):
            comb[u - t, t] = math.comb(u, t)
    for c in range(1, C + 1):
        for d0 in range(c):
            if math.gcd(c, d0) != 1:
                continue
            g = S if (c, d0) == (1, 0) else complete_row(c, d0)
            base = cocycle.of_gamma(g).coeffs  # length K
            B = np.zeros((K, K), dtype=np.complex128)
            for e in range(K):
                B[e, : K - e] = comb[e, : K - e] * base[e:]
            n_lo = math.ceil((-D - d0) / c)
            n_hi = (D - d0) // c
            ns = np.arange(n_lo, n_hi + 1, dtype=np.float64)
            npows = np.vander(ns, K, increasing=True)
            shifted = npows.astype(np.complex128) @ B
            for n, row in zip(range(n_lo, n_hi + 1), shifted):
                R[pos[(c, d0 + n * c)]] = row
    return R


def _fp_floor(sum_abs: float) -> float:
    return 16.0 * _EPS * sum_abs


def _series_tail(
    abs_terms: np.ndarray,
    data: _CosetData,
    w0: float,
    z: complex,
    C: int,
    D: int,
    extra_abs: float = 0.0,
) -> float:
    """Truncation estimate from the outermost computed shells.

    The c-tail extrapolates the average of the last few c-shells with the
    integral comparison sum_{c > C} (c/C)^(1-w0) ~ C/(w0-2); the d-tail
    extrapolates the outer |d| band with decay exponent w0.  A factor 2 pads
    shell roughness; a floating-point floor covers roundoff in the terms.
    """
    col = abs_terms if abs_terms.ndim == 2 else abs_terms[:, None]
    if w0 <= 2:
        return math.inf
    x = complex(z).real
    band_c = max(1, min(8, C))
    mask_c = data.cs > C - band_c
    shell_avg = col[mask_c].sum(axis=0) / band_c
    ctail = 2.0 * shell_avg * C / (w0 - 2.0)
    bw = min(max(2 * C, 8), D)
    mask_d = np.abs(data.ds) > D - bw
    band_sum = col[mask_d].sum(axis=0)
    dtail = 2.0 * band_sum * max(D - C * abs(x), 1.0) / (bw * (w0 - 1.0))
    floor = _fp_floor(float(col.sum(axis=0).max()) + extra_abs)
    return float((ctail + dtail).max()) + floor


def _jarrays(data: _CosetData, z: complex) -> tuple[np.ndarray, np.ndarray]:
    z = complex(z)
    j = data.cs * z + data.ds
    jb = data.cs * z.conjugate() + data.ds
    return j, jb


def eisenstein_rs(
    w: BiWeight, z: complex, t: TruncationParams = TruncationParams(), threads: int = 1
) -> SeriesValue:
    """Real-analytic Eisenstein series sum over B\\Gamma of
    j(g,z)^(-r) j(g, conj z)^(-s), identity coset contributing 1."""
    if w.r + w.s <= 2:
        raise ConvergenceError(f"weights ({w.r},{w.s}) diverge: r + s must exceed 2")
    z = complex(z)
    if z.imag <= 0:
        raise ValueError("z must lie in the upper half-plane")
    t.validate_at(z)
    data = _coset_data(t.C, t.D)
    j, jb = _jarrays(data, z)
    terms = j ** (-w.r) * jb ** (-w.s)
    total = 1.0 + fsum_complex_chunked(terms, threads)
    tail = _series_tail(np.abs(terms), data, w.r + w.s, z, t.C, t.D, extra_abs=1.0)
    return SeriesValue(total, w, "", t, tail)


def psi_series(
    hform: QExpansion,
    w: BiWeight,
    sign: str,
    z: complex,
    t: TruncationParams = TruncationParams(),
    threads: int = 1,
) -> SeriesValue:
    """Second-order series sum over B\\Gamma of r(gamma; X) j^(-r) jbar^(-s);
    the identity coset contributes nothing."""
    if not hform.is_cusp:
        raise ValueError("psi requires a cusp form")
    if w.r + w.s <= hform.k:
        raise ConvergenceError(
            f"psi needs r + s > k = {hform.k}, got r + s = {w.r + w.s}"
        )
    z = complex(z)
    t.validate_at(z)
    data = _coset_data(t.C, t.D)
    R = _period_table(hform, t.C, t.D)
    if sign == "-":
        R = np.conj(R)
    elif sign != "+":
        raise ValueError("sign must be '+' or '-'")
    j, jb = _jarrays(data, z)
    wts = j ** (-w.r) * jb ** (-w.s)
    mat = R * wts[:, None]
    coeffs = np.empty(R.shape[1], dtype=np.complex128)
    for col in range(R.shape[1]):
        coeffs[col] = fsum_complex_chunked(mat[:, col], threads)
    tail = _series_tail(np.abs(mat), data, w.r + w.s - hform.k + 2, z, t.C, t.D)
    return SeriesValue(PolyC(coeffs, hform.k - 2), w, sign, t, tail)


def phi(
    hform: QExpansion,
    w: BiWeight,
    sign: str,
    z: complex,
    t: TruncationParams = TruncationParams(),
    route: str = "decomp",
    threads: int = 1,
) -> SeriesValue:
    """Invariant series sum over B\\Gamma of the slashed Eichler integral.

    The default route assembles psi + F * E; the direct route slashes the
    Eichler integral across coset representatives (small rectangles only:
    every image point must stay above the evaluation floor).
    """
    z = complex(z)
    if route == "decomp":
        psiv = psi_series(hform, w, sign, z, t, threads)
        ev = eisenstein_rs(w, z, t, threads)
        F = eichler_F(hform, z, sign)
        value = psiv.value + F * ev.value
        ftail = eval_tail_bound(hform, z.imag) / (2 * math.pi)
        tail = psiv.tail_estimate + F.norm_inf() * ev.tail_estimate
        tail += abs(ev.value) * ftail
        return SeriesValue(value, w, sign, t, tail)
    if route != "direct":
        raise ValueError(f"unknown route {route!r}")
    if w.r + w.s <= hform.k:
        raise ConvergenceError(f"phi needs r + s > k = {hform.k}")
    t.validate_at(z)
    k = hform.k
    data = _coset_data(t.C, t.D)
    jarr, _ = _jarrays(data, z)
    min_height = z.imag / float(np.max(np.abs(jarr))) ** 2
    if min_height < Y_MIN:
        raise PrecisionError(
            "direct route would evaluate below the floor; shrink the rectangle"
        )
    rows = [eichler_F(hform, z, sign).coeffs]  # identity coset
    for g in enumerate_cosets(t.C, t.D)[1:]:
        gz = mobius(g, z)
        val = act_poly(eichler_F(hform, gz, sign), g, k)
        j = jfactor(g, z)
        jb = jfactor(g, z.conjugate())
        rows.append(val.coeffs * (j ** (-w.r) * jb ** (-w.s)))
    mat = np.array(rows)
    coeffs = np.empty(mat.shape[1], dtype=np.complex128)
    for col in range(mat.shape[1]):
        coeffs[col] = fsum_complex(mat[:, col])
    tail = _series_tail(np.abs(mat[1:]), data, w.r + w.s - k + 2, z, t.C, t.D)
    return SeriesValue(PolyC(coeffs, k - 2), w, sign, t, tail)


def coeff_decompose(P: PolyC, z: complex, k: int) -> np.ndarray:
    """Coefficients phi(i) with P(X) = sum_i phi(i) (X-z)^i (X-conj z)^(k-2-i),
    by solving the monomial-basis linear system."""
    z = complex(z)
    if z.imag <= 0:
        raise ValueError("z must lie in the upper half-plane")
    m = k - 2
    if P.bound > m:
        raise ValueError("polynomial degree exceeds k - 2")
    A = np.empty((m + 1, m + 1), dtype=np.complex128)
    lo = np.array([-z, 1.0], dtype=np.complex128)
    hi = np.array([-z.conjugate(), 1.0], dtype=np.complex128)
    lo_pows = [np.array([1.0 + 0j])]
    hi_pows = [np.array([1.0 + 0j])]
    for _ in range(m):
        lo_pows.append(np.convolve(lo_pows[-1], lo))
        hi_pows.append(np.convolve(hi_pows[-1], hi))
    for i in range(m + 1):
        col = np.convolve(lo_pows[i], hi_pows[m - i])
        A[:, i] = col
    try:
        sol = np.linalg.solve(A, PolyC(P.coeffs, m).coeffs)
    except np.linalg.LinAlgError as exc:  # unreachable for z in H
        raise ArithmeticError("singular decomposition system") from exc
    return sol


def phi_coefficient(
    hform: QExpansion,
    w: BiWeight,
    sign: str,
    j: int,
    z: complex,
    t: TruncationParams = TruncationParams(),
) -> complex:
    """Coefficient of (X-z)^j (X-conj z)^(k-2-j) in phi."""
    if not 0 <= j <= hform.k - 2:
        raise ValueError(f"j must lie in 0..{hform.k - 2}")
    phiv = phi(hform, w, sign, z, t)
    return complex(coeff_decompose(phiv.value, z, hform.k)[j])


@lru_cache(maxsize=4)
def _lambda_rows(f: QExpansion, C: int, D: int) -> np.ndarray:
    """Lambda_f(s, -d/c) aligned with the coset order, shape (k-1, n_cosets);
    row index is s - 1."""
    data = _coset_data(C, D)
    table = lambda_table(f, C)
    out = np.empty((f.k - 1, data.cs.size), dtype=np.complex128)
    for s in range(1, f.k):
        out[s - 1] = table.row(s, data.cs, data.ds)
    return out


def closed_form_phi_j(
    hform: QExpansion,
    w: BiWeight,
    sign: str,
    j: int,
    z: complex,
    t: TruncationParams = TruncationParams(),
) -> complex:
    """Two-term closed formula for the basis coefficient phi(j; z).

    Plus case: boundary Eichler-type integral times the Eisenstein series,
    plus the double binomial sum over twisted L-values against automorphy
    factors.  The minus case is evaluated through the exact conjugation
    symmetry phi^-_{r,s}(j) = conj(phi^+_{s,r}(k-2-j)).
    """
    k = hform.k
    if not 0 <= j <= k - 2:
        raise ValueError(f"j must lie in 0..{k - 2}")
    if sign == "-":
        return complex(
            np.conj(closed_form_phi_j(hform, w.swapped(), "+", k - 2 - j, z, t))
        )
    if sign != "+":
        raise ValueError("sign must be '+' or '-'")
    if w.r + w.s <= k:
        raise ConvergenceError(f"needs r + s > k = {k}")
    z = complex(z)
    t.validate_at(z)
    r, s = w.r, w.s
    # prefactor from w - X = ((w-z)(X-cz) + (cz-w)(X-z)) / (z - cz)
    pref = (z - z.conjugate()) ** (2 - k)
    # boundary term
    lo = np.array([-z.conjugate(), 1.0], dtype=np.complex128)
    hi = np.array([-z, 1.0], dtype=np.complex128)
    wpoly = np.array([1.0 + 0j])
    for _ in range(j):
        wpoly = np.convolve(wpoly, lo)
    for _ in range(k - 2 - j):
        wpoly = np.convolve(wpoly, hi)
    bnd_int = integral_f_wpoly(hform, wpoly, z)
    ev = eisenstein_rs(w, z, t)
    total = (-1) ** j * math.comb(k - 2, j) * pref * bnd_int * ev.value
    # twisted double sum over the non-trivial cosets
    data = _coset_data(t.C, t.D)
    lam = _lambda_rows(hform, t.C, t.D)
    jarr, jbarr = _jarrays(data, z)
    cfl = data.cs.astype(np.float64)
    jpow: dict[int, np.ndarray] = {}
    jbpow: dict[int, np.ndarray] = {}

    def _pow(cache, base, e):
        if e not in cache:
            cache[e] = base ** (-e)
        return cache[e]

    for m in range(j + 1):
        for n in range(k - 1 - j):
            alpha = (
                i_power(1 - 2 * j - m - n)
                * math.comb(k - 2, j)
                * math.comb(j, m)
                * math.comb(k - 2 - j, n)
            )
            terms = (
                lam[m + n]
                * cfl ** (m + n - k + 2)
                * _pow(jpow, jarr, r + j + n + 2 - k)
                * _pow(jbpow, jbarr, s + m - j)
            )
            total += alpha * pref * fsum_complex(terms)
    return complex(total)


def fourier_coefficient(fn, l: int, y: float, M: int = 128, check_tol: float = 1e-6) -> complex:
    """Trapezoidal Fourier mode int_0^1 fn(x + iy) e^(-2 pi i l x) dx.

    Spectrally accurate for smooth 1-periodic integrands; raises if the
    integrand visibly fails periodicity across one period.
    """
    if M < 64:
        raise ValueError("M must be >= 64")
    left = fn(complex(0.0, y))
    right = fn(complex(1.0, y))
    scale = max(1.0, abs(left))
    if abs(left - right) > check_tol * scale:
        raise ValueError("integrand is not 1-periodic in x")
    xs = np.arange(M) / M
    vals = np.array([fn(complex(x, y)) for x in xs], dtype=np.complex128)
    phase = np.exp(-2j * np.pi * l * xs)
    return fsum_complex(vals * phase) / M


def kloosterman_twisted(
    f: QExpansion, c: int, l: int, m: int, table: LambdaTable | None = None
) -> complex:
    """Finite twisted sum over d mod c, gcd(d, c) = 1, of
    Lambda_f(m, -d/c) e^(2 pi i l d / c)."""
    if c < 1:
        raise ValueError("c must be >= 1")
    if table is None:
        table = lambda_table(f, c)
    if table.C < c:
        raise KeyError(f"Lambda table covers c <= {table.C} < {c}")
    terms = [
        table.value(m, c, d) * cmath.exp(2j * math.pi * l * d / c)
        for d in range(c)
        if math.gcd(d, c) == 1
    ]
    return fsum_complex(np.array(terms, dtype=np.complex128))


def poincare(
    n: int, k: int, z: complex, t: TruncationParams = TruncationParams(), threads: int = 1
) -> SeriesValue:
    """Holomorphic Poincare series sum over B\\Gamma of e^(2 pi i n gz) j^(-k);
    n = 0 is the weight-k Eisenstein series."""
    if k < 4 or k % 2 != 0:
        raise ConvergenceError("Poincare series needs even k >= 4")
    if n < 0:
        raise ValueError("n must be >= 0")
    z = complex(z)
    t.validate_at(z)
    data = _coset_data(t.C, t.D)
    j, _ = _jarrays(data, z)
    gz = (data.as_ * z + data.bs) / j
    terms = np.exp(2j * np.pi * n * gz) * j ** (-k)
    total = cmath.exp(2j * math.pi * n * z) + fsum_complex_chunked(terms, threads)
    tail = _series_tail(np.abs(terms), data, k, z, t.C, t.D, extra_abs=1.0)
    return SeriesValue(total, BiWeight(k, 0), "", t, tail)


def second_order_G(
    n: int,
    hform: QExpansion,
    k: int,
    z: complex,
    t: TruncationParams = TruncationParams(),
    sign: str = "+",
    threads: int = 1,
) -> SeriesValue:
    """Second-order Poincare-type series sum over B\\Gamma of
    r(gamma; X) e^(2 pi i n gz) j^(-k); requires k > weight of the form."""
    k1 = hform.k
    if not (k % 2 == 0 and k > k1 > 2):
        raise ConvergenceError(f"need even k > k1 = {k1} > 2, got k = {k}")
    if n < 0:
        raise ValueError("n must be >= 0")
    z = complex(z)
    t.validate_at(z)
    data = _coset_data(t.C, t.D)
    R = _period_table(hform, t.C, t.D)
    if sign == "-":
        R = np.conj(R)
    elif sign != "+":
        raise ValueError("sign must be '+' or '-'")
    j, _ = _jarrays(data, z)
    gz = (data.as_ * z + data.bs) / j
    wts = np.exp(2j * np.pi * n * gz) * j ** (-k)
    mat = R * wts[:, None]
    coeffs = np.empty(R.shape[1], dtype=np.complex128)
    for col in range(R.shape[1]):
        coeffs[col] = fsum_complex_chunked(mat[:, col], threads)
    tail = _series_tail(np.abs(mat), data, k - k1 + 2, z, t.C, t.D)
    return SeriesValue(PolyC(coeffs, k1 - 2), BiWeight(k, 0), sign, t, tail)

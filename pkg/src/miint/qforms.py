"""Exact q-expansions of level-one holomorphic modular forms.

Coefficients are exact integers (or rationals) up to the truncation length;
conversion to floating point happens only at evaluation time, so downstream
checks see a single numerical error source.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

from .errors import PrecisionError

DEFAULT_N = 120
Y_MIN = 0.05


def bernoulli(m: int) -> Fraction:
    """Exact Bernoulli number B_m (B_1 = -1/2 convention)."""
    B = [Fraction(0)] * (m + 1)
    for n in range(m + 1):
        B[n] = Fraction(1) if n == 0 else -sum(
            Fraction(math.comb(n + 1, j)) * B[j] for j in range(n)
        ) / (n + 1)
    return B[m]


def sigma(n: int, k: int) -> int:
    """Divisor power sum by trial division (kept naive on purpose: it is the
    independent oracle for the Eisenstein coefficients)."""
    if n <= 0:
        return 0
    total = 0
    i = 1
    while i * i <= n:
        if n % i == 0:
            total += i**k
            if i * i != n:
                total += (n // i) ** k
        i += 1
    return total


@dataclass(frozen=True)
class QExpansion:
    """Weight plus exact coefficients a(0..N) of a level-one holomorphic form."""

    k: int
    coeffs: tuple  # Fraction or int entries, length N + 1

    def __post_init__(self):
        if self.k % 2 != 0 or self.k < 0:
            raise ValueError(f"weight must be even and >= 0, got {self.k}")

    @property
    def N(self) -> int:
        return len(self.coeffs) - 1

    @property
    def is_cusp(self) -> bool:
        return self.coeffs[0] == 0

    def a(self, n: int):
        return self.coeffs[n]

    def __mul__(self, other):
        if isinstance(other, QExpansion):
            n = min(self.N, other.N)
            prod = [
                sum(self.coeffs[i] * other.coeffs[m - i] for i in range(m + 1) if i <= self.N and m - i <= other.N)
                for m in range(n + 1)
            ]
            return QExpansion(self.k + other.k, tuple(prod))
        return QExpansion(self.k, tuple(c * other for c in self.coeffs))

    __rmul__ = __mul__

    def __add__(self, other: "QExpansion") -> "QExpansion":
        if self.k != other.k:
            raise ValueError("cannot add forms of different weights")
        n = min(self.N, other.N)
        return QExpansion(self.k, tuple(self.coeffs[i] + other.coeffs[i] for i in range(n + 1)))

    def __sub__(self, other: "QExpansion") -> "QExpansion":
        return self + (-1) * other

    def __pow__(self, e: int) -> "QExpansion":
        if e < 0:
            raise ValueError("negative powers not supported")
        out = QExpansion(0, tuple([1] + [0] * self.N))
        base = self
        while e:
            if e & 1:
                out = out * base
            base = base * base
            e >>= 1
        return out


@lru_cache(maxsize=None)
def eisenstein_q(k: int, N: int = DEFAULT_N) -> QExpansion:
    """Normalised Eisenstein series E_k = 1 - (2k/B_k) sum sigma_{k-1}(n) q^n."""
    if k % 2 != 0 or k < 4:
        raise ValueError("k must be even and >= 4")
    if N < 0:
        raise ValueError("N must be >= 0")
    factor = Fraction(-2 * k) / bernoulli(k)
    coeffs = [Fraction(1)] + [factor * sigma(n, k - 1) for n in range(1, N + 1)]
    norm = [int(c) if c.denominator == 1 else c for c in coeffs]
    return QExpansion(k, tuple(norm))


@lru_cache(maxsize=None)
def delta_q(N: int = DEFAULT_N) -> QExpansion:
    """Discriminant cusp form Delta = (E4^3 - E6^2)/1728, integer coefficients."""
    if N < 1:
        raise ValueError("N must be >= 1")
    e4 = eisenstein_q(4, N)
    e6 = eisenstein_q(6, N)
    diff = e4 * e4 * e4 - e6 * e6
    out = []
    for c in diff.coeffs:
        c = Fraction(c) / 1728
        if c.denominator != 1:
            raise ArithmeticError("(E4^3 - E6^2)/1728 must have integer coefficients")
        out.append(int(c))
    return QExpansion(12, tuple(out))


def cusp_basis(k: int, N: int = DEFAULT_N) -> list[QExpansion]:
    """Echelonised basis of S_k built from Delta * E4^a * E6^b, 4a + 6b = k - 12.

    Leading coefficients are 1 at q, q^2, ... after exact Gaussian elimination.
    Empty for k < 12 or dim S_k = 0.
    """
    if k < 12 or k % 2 != 0:
        return []
    delta = delta_q(N)
    prods = []
    for a_exp in range((k - 12) // 4 + 1):
        rem = k - 12 - 4 * a_exp
        if rem >= 0 and rem % 6 == 0:
            prods.append(delta * eisenstein_q(4, N) ** a_exp * eisenstein_q(6, N) ** (rem // 6))
    if not prods:
        return []
    rows = [[Fraction(c) for c in p.coeffs] for p in prods]
    # exact echelon on columns 1, 2, ... (column 0 is zero: cusp forms)
    basis_rows = []
    col = 1
    while rows and col <= N:
        pivot = next((i for i, r in enumerate(rows) if r[col] != 0), None)
        if pivot is None:
            col += 1
            continue
        row = rows.pop(pivot)
        inv = row[col]
        row = [c / inv for c in row]
        rows = [
            [rc - rr[col] * c for rc, c in zip(rr, row)] if rr[col] != 0 else rr
            for rr in rows
        ]
        for prev in basis_rows:
            if prev[col] != 0:
                fac = prev[col]
                for j in range(len(prev)):
                    prev[j] -= fac * row[j]
        basis_rows.append(row)
        col += 1
    dim = dim_cusp_classical(k)
    basis_rows = basis_rows[:dim]
    out = []
    for row in basis_rows:
        out.append(QExpansion(k, tuple(int(c) if c.denominator == 1 else c for c in row)))
    return out


def dim_modular_classical(k: int) -> int:
    if k < 0 or k % 2 != 0:
        return 0
    return k // 12 if k % 12 == 2 else k // 12 + 1


def dim_cusp_classical(k: int) -> int:
    return 0 if k < 12 else dim_modular_classical(k) - 1


def eval_tail_bound(f: QExpansion, y: float) -> float:
    """Estimate of |sum_{n > N} a(n) q^n| at height y.

    Uses the empirical growth constant max |a(n)| / n^p over the stored range
    with p = k/2 + 1 for cusp forms (divisor-bound regime) and p = k otherwise,
    then a geometric comparison.  An estimate, not a proof-grade bound.
    """
    N = f.N
    x = math.exp(-2 * math.pi * y)
    p = f.k / 2 + 1 if f.is_cusp else float(f.k)
    csup = max(
        (abs(float(f.coeffs[n])) / n**p for n in range(1, N + 1) if f.coeffs[n] != 0),
        default=0.0,
    )
    rho = x * (1 + 1 / (N + 1)) ** p
    if rho >= 1:
        return math.inf
    t_next = csup * (N + 1) ** p * x ** (N + 1)
    return t_next / (1 - rho)


def eval_form(f: QExpansion, z: complex, tol: float | None = None) -> complex:
    """Truncated q-series value sum_{n <= N} a(n) e^(2 pi i n z).

    Raises PrecisionError when a tolerance is requested and the tail estimate
    exceeds it.
    """
    z = complex(z)
    if z.imag < Y_MIN:
        raise PrecisionError(f"Im z = {z.imag} below evaluation floor {Y_MIN}")
    if tol is not None and eval_tail_bound(f, z.imag) > tol:
        raise PrecisionError("q-series tail exceeds requested tolerance")
    # IEEE remainder is exact: periodicity in x holds bitwise for exact shifts
    q = cmath.exp(2j * cmath.pi * complex(math.remainder(z.real, 1.0), z.imag))
    acc = 0j
    for c in f.coeffs[::-1]:
        acc = acc * q + (0j if c == 0 else complex(c))
    return acc


def eval_form_anywhere(f: QExpansion, z: complex) -> complex:
    """Evaluate a (genuinely modular) form at any z in H.

    Translates and inverts into the fundamental domain, accumulating the
    weight-k automorphy factor, then sums the q-series high up.  This keeps
    vertical-line quadratures accurate arbitrarily close to the real axis.
    """
    z = complex(z)
    if z.imag <= 0:
        raise ValueError("z must lie in the upper half-plane")
    factor = 1.0 + 0j
    for _ in range(10_000):
        n = round(z.real)
        z = z - n
        if abs(z) >= 1 - 1e-15:
            break
        # f(z) = z^{-k} f(-1/z)
        factor *= z ** (-f.k)
        z = -1 / z
    return factor * eval_form(f, z)


def derivative_q(f: QExpansion) -> "QExpansion":
    """Term-wise derivative divided by 2 pi i, i.e. q d/dq: a(n) -> n a(n)."""
    return QExpansion(f.k + 2, tuple(n * c for n, c in enumerate(f.coeffs)))


def eval_derivative(f: QExpansion, z: complex) -> complex:
    """d/dz of the q-series at z (term-wise, exact coefficients)."""
    return 2j * cmath.pi * eval_form(derivative_q(f), z)

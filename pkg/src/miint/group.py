"""SL2(Z) elements, slash actions and coset machinery.

Carries the three right actions used everywhere downstream: the scalar
bi-weight action on functions of z, the polynomial action on X, and their
tensor product.  Cosets of the translation subgroup B = {±T^n} are
parametrised by bottom rows (c, d) with c > 0 and gcd(c, d) = 1; the sign
quotient is legal for every series in this package because the total weight
is even.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

#: point at infinity on the boundary of the upper half-plane
INFINITY = object()


def _ext_gcd(a: int, b: int) -> tuple[int, int, int]:
    """Return (g, x, y) with a*x + b*y == g == gcd(a, b)."""
    old_r, r = a, b
    old_x, x = 1, 0
    old_y, y = 0, 1
    while r != 0:
        q = old_r // r
        old_r, r = r, old_r - q * r
        old_x, x = x, old_x - q * x
        old_y, y = y, old_y - q * y
    return old_r, old_x, old_y


@dataclass(frozen=True)
class GroupElement:
    """Integer unimodular 2x2 matrix (a b; c d), det = 1."""

    a: int
    b: int
    c: int
    d: int

    def __post_init__(self):
        if self.a * self.d - self.b * self.c != 1:
            raise ValueError(f"determinant must be 1: {self}")

    def __mul__(self, other: "GroupElement") -> "GroupElement":
        return GroupElement(
            self.a * other.a + self.b * other.c,
            self.a * other.b + self.b * other.d,
            self.c * other.a + self.d * other.c,
            self.c * other.b + self.d * other.d,
        )

    def inv(self) -> "GroupElement":
        return GroupElement(self.d, -self.b, -self.c, self.a)

    def neg_entries(self) -> tuple[int, int, int, int]:
        return (-self.a, -self.b, -self.c, -self.d)

    @property
    def entries(self) -> tuple[int, int, int, int]:
        return (self.a, self.b, self.c, self.d)


IDENTITY = GroupElement(1, 0, 0, 1)
S = GroupElement(0, -1, 1, 0)
T = GroupElement(1, 1, 0, 1)
R = S * T  # (0 -1; 1 1), order 6 up to sign


def T_pow(n: int) -> GroupElement:
    return GroupElement(1, n, 0, 1)


@dataclass(frozen=True)
class BiWeight:
    """Pair of integer weights (r, s); only the parity r + s even is enforced.

    Nonpositive entries are allowed: intermediate automorphy exponents in the
    coefficient formulas go below zero even when the ambient weights are
    positive.
    """

    r: int
    s: int

    def __post_init__(self):
        if (self.r + self.s) % 2 != 0:
            raise ValueError(f"r + s must be even, got ({self.r}, {self.s})")

    def raised(self) -> "BiWeight":
        return BiWeight(self.r + 1, self.s - 1)

    def lowered(self) -> "BiWeight":
        return BiWeight(self.r - 1, self.s + 1)

    def swapped(self) -> "BiWeight":
        return BiWeight(self.s, self.r)


class PolyC:
    """Complex-coefficient polynomial in one formal variable X.

    The degree bound is fixed at construction; coefficients are stored
    ascending.  Conjugation acts on coefficients only (X is treated as real).
    """

    __slots__ = ("coeffs",)

    def __init__(self, coeffs, bound: int | None = None):
        arr = np.asarray(coeffs, dtype=np.complex128).reshape(-1).copy()
        if bound is not None:
            if arr.size > bound + 1:
                raise ValueError(f"degree overflow: {arr.size - 1} > {bound}")
            if arr.size < bound + 1:
                arr = np.concatenate(
                    [arr, np.zeros(bound + 1 - arr.size, dtype=np.complex128)]
                )
        self.coeffs = arr

    @classmethod
    def zero(cls, bound: int) -> "PolyC":
        return cls(np.zeros(bound + 1, dtype=np.complex128))

    @classmethod
    def one(cls, bound: int = 0) -> "PolyC":
        c = np.zeros(bound + 1, dtype=np.complex128)
        c[0] = 1.0
        return cls(c)

    @property
    def bound(self) -> int:
        return self.coeffs.size - 1

    def __add__(self, other: "PolyC") -> "PolyC":
        n = max(self.coeffs.size, other.coeffs.size)
        out = np.zeros(n, dtype=np.complex128)
        out[: self.coeffs.size] += self.coeffs
        out[: other.coeffs.size] += other.coeffs
        return PolyC(out)

    def __sub__(self, other: "PolyC") -> "PolyC":
        return self + (-other)

    def __neg__(self) -> "PolyC":
        return PolyC(-self.coeffs)

    def __mul__(self, other):
        if isinstance(other, PolyC):
            return PolyC(np.convolve(self.coeffs, other.coeffs))
        return PolyC(self.coeffs * complex(other))

    __rmul__ = __mul__

    def __call__(self, x: complex) -> complex:
        # Horner, highest coefficient first
        acc = 0j
        for c in self.coeffs[::-1]:
            acc = acc * x + c
        return acc

    def conjugate(self) -> "PolyC":
        return PolyC(np.conj(self.coeffs))

    def shift(self, a: complex) -> "PolyC":
        """Taylor shift X -> X + a."""
        n = self.coeffs.size
        out = np.zeros(n, dtype=np.complex128)
        apow = np.ones(n, dtype=np.complex128)
        for e in range(n):
            if e:
                apow[e] = apow[e - 1] * a
        for t in range(n):
            acc = 0j
            for u in range(t, n):
                acc += math.comb(u, t) * apow[u - t] * self.coeffs[u]
            out[t] = acc
        return PolyC(out)

    def norm_inf(self) -> float:
        return float(np.max(np.abs(self.coeffs))) if self.coeffs.size else 0.0

    def __repr__(self):
        return f"PolyC({np.round(self.coeffs, 6)})"


def mobius(g: GroupElement, z):
    """Fractional-linear image of z; z may be complex, rational or INFINITY."""
    a, b, c, d = g.entries
    if z is INFINITY:
        if c == 0:
            return INFINITY
        return Fraction(a, c)
    if isinstance(z, (int, Fraction)):
        z = Fraction(z)
        den = c * z + d
        if den == 0:
            return INFINITY
        return (a * z + b) / den
    z = complex(z)
    return (a * z + b) / (c * z + d)


def jfactor(g: GroupElement, z: complex) -> complex:
    """Automorphy factor c*z + d."""
    return g.c * complex(z) + g.d


def act_rs(fval: complex, g: GroupElement, z: complex, w: BiWeight) -> complex:
    """Apply the bi-weight automorphy factor to a pre-computed value f(gz)."""
    z = complex(z)
    if z.imag == 0:
        raise ValueError("act_rs is defined on the upper half-plane only")
    j = jfactor(g, z)
    jb = jfactor(g, z.conjugate())
    return j ** (-w.r) * jb ** (-w.s) * fval


def act_rs_fn(fn, g: GroupElement, w: BiWeight):
    """Right-translate a function on H: (f |_{r,s} g)(z)."""

    def acted(z: complex) -> complex:
        return act_rs(fn(mobius(g, z)), g, z, w)

    return acted


def act_poly(P: PolyC, g: GroupElement, k: int) -> PolyC:
    """Polynomial action: X -> P(gX) * j(g, X)^(k-2), re-expanded.

    Preserves the degree bound k - 2.
    """
    if P.bound > k - 2:
        raise ValueError(f"degree {P.bound} exceeds bound {k - 2}")
    a, b, c, d = g.entries
    m = k - 2
    if c == 0 and a == d:
        # +-T^n: pure shift by n = a*b, factor (+-1)^(k-2) = 1 for even k
        return PolyC(P.shift(a * b).coeffs, m)
    out = np.zeros(m + 1, dtype=np.complex128)
    num = np.array([b, a], dtype=np.complex128)  # a*X + b, ascending
    den = np.array([d, c], dtype=np.complex128)  # c*X + d
    # p_j * (aX+b)^j (cX+d)^(m-j): build power tables once
    num_pows = [np.array([1.0 + 0j])]
    den_pows = [np.array([1.0 + 0j])]
    for _ in range(m):
        num_pows.append(np.convolve(num_pows[-1], num))
        den_pows.append(np.convolve(den_pows[-1], den))
    for j in range(min(P.coeffs.size, m + 1)):
        pj = P.coeffs[j]
        if pj == 0:
            continue
        term = np.convolve(num_pows[j], den_pows[m - j])
        out[: term.size] += pj * term
    return PolyC(out, m)


def act_poly_matrix(g: GroupElement, k: int) -> np.ndarray:
    """Matrix of `act_poly(., g, k)` on ascending monomial coefficients."""
    m = k - 2
    mat = np.zeros((m + 1, m + 1), dtype=np.complex128)
    for j in range(m + 1):
        e = np.zeros(m + 1)
        e[j] = 1.0
        mat[:, j] = act_poly(PolyC(e), g, k).coeffs
    return mat


def act_tensor(F, g: GroupElement, w: BiWeight, k: int):
    """Tensor action on a PolyC-valued function of z.

    (F | g)(z, X) = F(gz, gX) j(g,z)^(-r) j(g, conj z)^(-s) j(g,X)^(k-2).
    """

    def acted(z: complex) -> PolyC:
        z = complex(z)
        val = F(mobius(g, z))
        pol = act_poly(val, g, k)
        j = jfactor(g, z)
        jb = jfactor(g, z.conjugate())
        return pol * (j ** (-w.r) * jb ** (-w.s))

    return acted


def enumerate_coset_rows(C: int, D: int) -> tuple[np.ndarray, np.ndarray]:
    """Bottom rows (c, d) of the non-trivial B\\Gamma representatives.

    Fixed order: ascending c, then ascending |d|, positive d before negative.
    The identity coset is not included.
    """
    if C < 1 or D < 1:
        raise ValueError("C and D must be >= 1")
    cs, ds = [], []
    for c in range(1, C + 1):
        for ad in range(0, D + 1):
            signs = (ad,) if ad == 0 else (ad, -ad)
            for d in signs:
                if math.gcd(c, abs(d)) == 1:
                    cs.append(c)
                    ds.append(d)
    return np.array(cs, dtype=np.int64), np.array(ds, dtype=np.int64)


def complete_row(c: int, d: int) -> GroupElement:
    """One matrix (a b; c d) in SL2(Z) with the given bottom row."""
    g, x, y = _ext_gcd(d, c)
    if g != 1:
        raise ValueError(f"gcd({c}, {d}) != 1")
    # a*d - b*c = 1 with a = x, b = -y
    return GroupElement(x, -y, c, d)


def enumerate_cosets(C: int, D: int) -> list[GroupElement]:
    """Identity plus one representative per (c, d), 0 < c <= C, |d| <= D."""
    cs, ds = enumerate_coset_rows(C, D)
    return [IDENTITY] + [complete_row(int(c), int(d)) for c, d in zip(cs, ds)]


def word_decompose(g: GroupElement) -> list[tuple[str, int]]:
    """Write g, up to sign, as a word in S and T-powers.

    Returns [('T', n1), ('S', 1), ('T', n2), ...]; the product of the word
    equals +-g exactly.  All actions in this package have even total weight,
    so the sign ambiguity is harmless.
    """
    word: list[tuple[str, int]] = []
    a, b, c, d = g.entries
    while c != 0:
        q = a // c
        word.append(("T", q))
        word.append(("S", 1))
        # g = T^q S g' with g' = S^{-1} T^{-q} g (S^{-1} ~ -S, sign dropped)
        a, b, c, d = c, d, -(a - q * c), -(b - q * d)
    n = a * b  # matrix is +-T^n here
    word.append(("T", n))
    return [(kind, n) for kind, n in word if not (kind == "T" and n == 0)]


def word_to_matrix(word: list[tuple[str, int]]) -> GroupElement:
    g = IDENTITY
    for kind, n in word:
        g = g * (S if kind == "S" else T_pow(n))
    return g

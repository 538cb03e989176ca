"""Exact arithmetic for the symmetric-power-type representation rho and the
dimension formulas for vector-valued and second-order form spaces.

Everything here is theorem-grade: big-integer / rational arithmetic only,
except for the complex spot-check of the sixth-root-of-unity identity.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from fractions import Fraction

Matrix = list[list[int]]


def _mat_mul(A: Matrix, B: Matrix) -> Matrix:
    n = len(A)
    return [
        [sum(A[i][l] * B[l][j] for l in range(n)) for j in range(n)] for i in range(n)
    ]


def _mat_eye(n: int) -> Matrix:
    return [[1 if i == j else 0 for j in range(n)] for i in range(n)]


def legendre3(n: int) -> int:
    """Legendre symbol (n | 3)."""
    return {0: 0, 1: 1, 2: -1}[n % 3]


@dataclass(frozen=True)
class RhoRep:
    """(k1-1)-dimensional representation determined on the generators."""

    k1: int
    matS: tuple[tuple[int, ...], ...]
    matT: tuple[tuple[int, ...], ...]

    def as_lists(self) -> tuple[Matrix, Matrix]:
        return [list(r) for r in self.matS], [list(r) for r in self.matT]


def rho_matrices(k1: int) -> RhoRep:
    """Generator matrices: S anti-diagonal with alternating signs, T a signed
    Pascal matrix; -I acts as the identity."""
    if k1 % 2 != 0 or k1 < 4:
        raise ValueError("k1 must be even and >= 4")
    n = k1 - 1
    matS = [[((-1) ** i if j == k1 - 2 - i else 0) for j in range(n)] for i in range(n)]
    matT = [[(-1) ** (i + j) * math.comb(j, i) for j in range(n)] for i in range(n)]
    return RhoRep(k1, tuple(map(tuple, matS)), tuple(map(tuple, matT)))


def check_relations(rep: RhoRep) -> bool:
    """S^2 = I and (S T)^3 = I, exactly."""
    matS, matT = rep.as_lists()
    n = len(matS)
    eye = _mat_eye(n)
    if _mat_mul(matS, matS) != eye:
        return False
    st = _mat_mul(matS, matT)
    return _mat_mul(_mat_mul(st, st), st) == eye


def trace_ST(k1: int) -> int:
    """Exact trace of rho(S) rho(T); equals (k1-1 | 3) and Tr(rho(ST)^2)."""
    rep = rho_matrices(k1)
    matS, matT = rep.as_lists()
    st = _mat_mul(matS, matT)
    return sum(st[i][i] for i in range(len(st)))


def trace_ST_squared(k1: int) -> int:
    rep = rho_matrices(k1)
    matS, matT = rep.as_lists()
    st = _mat_mul(matS, matT)
    st2 = _mat_mul(st, st)
    return sum(st2[i][i] for i in range(len(st2)))


def trace_ST_sum_formula(k1: int) -> int:
    """Independent route: sum_i (-1)^i binom(i, k1-2-i)."""
    return sum((-1) ** i * math.comb(i, k1 - 2 - i) for i in range(k1 - 1) if i >= k1 - 2 - i >= 0)


def legendre_seq(nmax: int) -> list[int]:
    """a_n = sum_{i+j=n} (-1)^i binom(i, j), by direct summation.

    Cross-checked elsewhere against the recurrence a_n + a_{n-1} + a_{n-2} = 0
    and the closed form a_n = (n+1 | 3).
    """
    if nmax < 2:
        raise ValueError("nmax must be >= 2")
    seq = []
    for n in range(nmax + 1):
        seq.append(sum((-1) ** i * math.comb(i, n - i) for i in range(n + 1) if i >= n - i))
    return seq


def legendre_seq_recurrence(nmax: int) -> list[int]:
    seq = [1, -1]
    while len(seq) <= nmax:
        seq.append(-seq[-1] - seq[-2])
    return seq[: nmax + 1]


def legendre_seq_closed(nmax: int) -> list[int]:
    return [legendre3(n + 1) for n in range(nmax + 1)]


def xi_identity_residuals(kmax: int) -> dict[int, tuple[complex, int]]:
    """For even k, xi^k/(1-xi^2) + xi^(2k)/(1-xi^(-2)) against -(k-1 | 3).

    xi = exp(i pi / 3).  Returns {k: (complex lhs, integer rhs)}.
    """
    xi = cmath.exp(1j * cmath.pi / 3)
    out = {}
    for k in range(4, kmax + 1, 2):
        lhs = xi**k / (1 - xi**2) + xi ** (2 * k) / (1 - xi**-2)
        out[k] = (lhs, -legendre3(k - 1))
    return out


def dim_modular(k: int) -> int:
    """dim M_k for level one, even k (0 for negative or odd weight)."""
    if k < 0 or k % 2 != 0:
        return 0
    if k % 12 == 2:
        return k // 12
    return k // 12 + 1


def dim_cusp(k: int) -> int:
    """dim S_k for level one."""
    if k < 12:
        return 0
    return dim_modular(k) - 1


def dim_Mk_rho(k: int, k1: int) -> int:
    """Dimension of weight-k vector-valued forms for rho, via the closed
    formula (5+k)/12 (k1-1) + i^(k+k1-2)/4 - (1/3)(k1-1|3)(k-1|3).

    Exact rational evaluation; a non-integer result signals a transcription
    bug and raises.
    """
    if not (k > k1 > 2) or k % 2 or k1 % 2:
        raise ValueError("need even k > k1 > 2")
    ipow = {0: 1, 1: 0, 2: -1, 3: 0}[(k + k1 - 2) % 4]  # real part of i^m; m even here
    val = (
        Fraction(5 + k, 12) * (k1 - 1)
        + Fraction(ipow, 4)
        - Fraction(1, 3) * legendre3(k1 - 1) * legendre3(k - 1)
    )
    if val.denominator != 1:
        raise ArithmeticError(f"dimension formula gave non-integer {val} at ({k},{k1})")
    if val < 0:
        raise ArithmeticError(f"negative dimension {val} at ({k},{k1})")
    return int(val)


def dim_M2c(k: int, k1: int) -> int:
    """Dimension of the space of extended second-order cusp-type invariants:
    2 dim(M_k) dim(S_k1) plus the vector-valued dimension."""
    return 2 * dim_modular(k) * dim_cusp(k1) + dim_Mk_rho(k, k1)

import math
import random
from fractions import Fraction

import numpy as np
import pytest

from miint.group import (
    BiWeight,
    GroupElement,
    IDENTITY,
    INFINITY,
    PolyC,
    S,
    T,
    T_pow,
    act_poly,
    act_poly_matrix,
    act_rs,
    act_tensor,
    complete_row,
    enumerate_coset_rows,
    enumerate_cosets,
    jfactor,
    mobius,
    word_decompose,
    word_to_matrix,
)


def random_word(rng, max_len=6):
    g = IDENTITY
    for _ in range(rng.randint(1, max_len)):
        g = g * rng.choice((S, T, T.inv()))
    return g


def test_determinant_enforced():
    with pytest.raises(ValueError):
        GroupElement(1, 1, 1, 1)


def test_composition_and_inverse_exact():
    rng = random.Random(1)
    for _ in range(30):
        g = random_word(rng)
        assert (g * g.inv()).entries == IDENTITY.entries
        h = random_word(rng)
        gh = g * h
        assert gh.a * gh.d - gh.b * gh.c == 1


def test_mobius_fixed_points():
    assert mobius(S, 1j) == 1j
    assert mobius(T, INFINITY) is INFINITY
    assert mobius(S.inv(), INFINITY) == Fraction(0)


def test_mobius_preserves_upper_half_plane():
    rng = random.Random(2)
    for _ in range(50):
        g = random_word(rng)
        z = complex(rng.uniform(-2, 2), rng.uniform(0.1, 3))
        assert mobius(g, z).imag > 0


def test_mobius_rational_boundary():
    g = complete_row(2, 1)
    assert mobius(g, INFINITY) == Fraction(g.a, 2)
    # pole of the fractional-linear map goes to infinity
    assert mobius(S, Fraction(0)) is INFINITY


def test_jfactor_trivial_values():
    assert jfactor(T, 0.3 + 1j) == 1
    assert jfactor(S, 1j) == 1j


def test_jfactor_cocycle_identity():
    rng = random.Random(3)
    worst = 0.0
    for _ in range(100):
        g, d = random_word(rng), random_word(rng)
        z = complex(rng.uniform(-1, 1), rng.uniform(0.5, 2.5))
        lhs = jfactor(g * d, z)
        rhs = jfactor(g, mobius(d, z)) * jfactor(d, z)
        worst = max(worst, abs(lhs - rhs) / abs(lhs))
    assert worst <= 1e-12


def test_act_rs_identity_and_parity():
    w = BiWeight(4, 2)
    assert act_rs(3 + 1j, IDENTITY, 2j, w) == 3 + 1j
    neg = GroupElement(-1, 0, 0, -1)
    # (-1)^(r+s) = 1 by the parity invariant
    assert abs(act_rs(3 + 1j, neg, 2j, w) - (3 + 1j)) < 1e-15


def test_act_rs_rejects_real_z():
    with pytest.raises(ValueError):
        act_rs(1.0, S, 1.0 + 0j, BiWeight(2, 2))


def test_biweight_parity_enforced():
    with pytest.raises(ValueError):
        BiWeight(3, 2)
    assert BiWeight(-1, 3).r == -1  # nonpositive entries allowed


def test_act_poly_constant_weight_two():
    one = PolyC([1.0])
    rng = random.Random(4)
    for _ in range(10):
        g = random_word(rng)
        out = act_poly(one, g, 2)
        assert abs(out.coeffs[0] - 1.0) < 1e-15


def test_act_poly_right_action_composition():
    # residual relative to the intermediate scale amplified by the action
    rng = random.Random(5)
    k = 12
    worst = 0.0
    for _ in range(50):
        g, d = random_word(rng), random_word(rng)
        P = PolyC([rng.uniform(-1, 1) + 1j * rng.uniform(-1, 1) for _ in range(k - 1)])
        mid = act_poly(P, g, k)
        lhs = act_poly(mid, d, k)
        rhs = act_poly(P, g * d, k)
        dmax = max(abs(e) for e in d.entries)
        scale = max(1.0, rhs.norm_inf(), mid.norm_inf() * float(dmax) ** (k - 2))
        worst = max(worst, (lhs - rhs).norm_inf() / scale)
    assert worst <= 1e-10


def test_act_poly_pointwise_oracle():
    # P = (X - z)^(k-2) acted by g, checked at k-1 complex sample points
    # off the real axis (the formal variable may be evaluated anywhere,
    # and this keeps clear of the pole of gX)
    k = 12
    z = 0.7 + 1.3j
    coeffs = [math.comb(k - 2, t) * (-z) ** (k - 2 - t) for t in range(k - 1)]
    P = PolyC(coeffs)
    rng = random.Random(6)
    samples = [1.1 * np.exp(2j * np.pi * t / (k - 1)) + 0.37j for t in range(k - 1)]
    for _ in range(5):
        g = random_word(rng)
        acted = act_poly(P, g, k)
        coeff_scale = acted.norm_inf()
        for x in samples:
            den = g.c * x + g.d
            gx = (g.a * x + g.b) / den
            direct = P(gx) * den ** (k - 2)
            scale = max(1.0, abs(direct), coeff_scale * abs(x) ** (k - 2))
            assert abs(acted(x) - direct) / scale <= 1e-10


def test_act_poly_degree_overflow():
    with pytest.raises(ValueError):
        act_poly(PolyC([1, 2, 3]), S, 2)


def test_act_poly_matrix_antihomomorphism():
    k = 8
    g, d = S * T, T.inv() * S
    M1 = act_poly_matrix(g, k)
    M2 = act_poly_matrix(d, k)
    M12 = act_poly_matrix(g * d, k)
    assert np.allclose(M2 @ M1, M12, rtol=1e-12, atol=1e-12)


def test_act_tensor_identity_and_composition():
    k = 12
    w = BiWeight(10, 10)
    rng = random.Random(7)
    base = PolyC([rng.uniform(-1, 1) + 1j * rng.uniform(-1, 1) for _ in range(k - 1)])
    F = lambda z: base * (1.0 / complex(z))
    assert (act_tensor(F, IDENTITY, w, k)(2j) - F(2j)).norm_inf() < 1e-15
    for _ in range(3):
        g, d = random_word(rng, 4), random_word(rng, 4)
        lhs = act_tensor(act_tensor(F, g, w, k), d, w, k)(2j)
        rhs = act_tensor(F, g * d, w, k)(2j)
        scale = max(1.0, rhs.norm_inf())
        assert (lhs - rhs).norm_inf() / scale <= 1e-10


def brute_coprime_count(C, D):
    return sum(
        1
        for c in range(1, C + 1)
        for d in range(-D, D + 1)
        if math.gcd(c, abs(d)) == 1
    )


def test_enumerate_cosets_counts():
    assert len(enumerate_cosets(1, 1)) == 4  # identity + (1,-1),(1,0),(1,1)
    assert len(enumerate_cosets(2, 2)) == 8  # identity + 7
    for C, D in ((3, 5), (5, 7), (10, 10)):
        assert len(enumerate_cosets(C, D)) == brute_coprime_count(C, D) + 1


def test_enumerate_cosets_rows_and_order():
    cs, ds = enumerate_coset_rows(3, 4)
    # ascending c, ascending |d|, positive sign first
    order = list(zip(cs.tolist(), ds.tolist()))
    assert order[:5] == [(1, 0), (1, 1), (1, -1), (1, 2), (1, -2)]
    for g in enumerate_cosets(3, 4)[1:]:
        assert g.a * g.d - g.b * g.c == 1
        assert g.c > 0


def test_word_decompose_trivials():
    assert word_decompose(IDENTITY) == []
    assert word_decompose(S) == [("S", 1)]
    assert word_decompose(T_pow(5)) == [("T", 5)]


def test_word_decompose_reassembly():
    rng = random.Random(8)
    pool = enumerate_cosets(10, 10)[1:]
    for g in rng.sample(pool, 20):
        m = word_to_matrix(word_decompose(g))
        assert m.entries == g.entries or m.entries == g.neg_entries()


def test_polyc_conjugation_and_eval():
    P = PolyC([1 + 2j, 3 - 1j, 0.5j])
    Q = P.conjugate()
    assert np.array_equal(Q.coeffs, np.conj(P.coeffs))
    x = 0.7
    assert abs(P(x).conjugate() - Q(x)) < 1e-15  # X treated as real


def test_polyc_shift_roundtrip():
    P = PolyC([1.0, -2.0, 3.0, 0.25])
    a = 0.3 - 0.7j
    Q = P.shift(a).shift(-a)
    assert (Q - P).norm_inf() < 1e-13

import random
from fractions import Fraction

import numpy as np
import pytest

from surfacekz.schottky import (HolomorphicBasis, OmegaFamily, PsiSeries,
                                SchottkyGroup, SchottkyValidationError,
                                a_cycle_integral, bernoulli_b, circle_nodes,
                                default_group, e_series, f_coeff, mobius_apply,
                                mobius_derivative, period_matrix,
                                reduce_letters, residue_formula_residual)


def test_group_validation():
    g = default_group(1)
    assert g.in_fundamental_domain(0.0)
    assert not g.in_fundamental_domain(g.alphas[0])
    with pytest.raises(SchottkyValidationError):
        SchottkyGroup([-1.0], [1.0], [1.5])
    with pytest.raises(SchottkyValidationError):
        # multiplier too large: the isometric circles overlap
        SchottkyGroup([-0.3, 0.3], [-0.1, 0.1], [0.5, 0.5])


def test_cross_ratio_law():
    g = default_group(2)
    rng = np.random.default_rng(0)
    for a in range(2):
        m = g.gen_mats[a]
        for _ in range(10):
            z = complex(rng.normal(), rng.normal()) * 2
            lhs = (mobius_apply(m, z) - g.alphas[a]) / (mobius_apply(m, z) - g.betas[a])
            rhs = g.qs[a] * (z - g.alphas[a]) / (z - g.betas[a])
            assert abs(lhs - rhs) < 1e-12 * max(1.0, abs(rhs))


def test_mobius_composition_and_fixed_points():
    g = default_group(2)
    z = 0.3 + 0.4j
    uv = g.apply_letters((1, 2), z)
    assert abs(uv - g.apply_letters((1,), g.apply_letters((2,), z))) < 1e-12
    assert abs(g.apply_letters((1,), g.alphas[0]) - g.alphas[0]) < 1e-12
    assert abs(g.apply_letters((), z) - z) < 1e-15
    assert reduce_letters((1, -1, 2)) == (2,)


def test_f_coeff_examples():
    # empty index string: identically 1
    assert f_coeff((), (1, -2, 1)) == 1
    assert f_coeff((), ()) == 1
    # single index: minus the signed letter count
    assert f_coeff((1,), (1, 1, 1)) == -3
    assert f_coeff((2,), (1, 1)) == 0
    # (a, a) on gamma_a^lam: lam^2/2
    assert f_coeff((1, 1), (1, 1, 1)) == Fraction(9, 2)
    assert f_coeff((1, 1), (-1, -1)) == Fraction(4, 2)


def test_f_symmetry_thousand_words():
    """f_{a_s..a_1}(g^{-1}) = (-1)^s f_{a_1..a_s}(g), exactly, on 1000 words."""
    rng = random.Random(42)
    checked = 0
    while checked < 1000:
        length = rng.randint(0, 6)
        letters = []
        while len(letters) < length:
            l = rng.choice([1, 2, -1, -2])
            if letters and letters[-1] == -l:
                continue
            letters.append(l)
        inv = tuple(-l for l in reversed(letters))
        s = rng.randint(0, 3)
        idx = tuple(rng.randint(1, 2) for _ in range(s))
        lhs = f_coeff(tuple(reversed(idx)), inv)
        rhs = (-1) ** s * f_coeff(idx, tuple(letters))
        assert lhs == rhs
        checked += 1


def test_e_series_matches_f_coeff():
    rng = random.Random(1)
    for _ in range(20):
        letters = []
        while len(letters) < 4:
            l = rng.choice([1, 2, -1, -2])
            if letters and letters[-1] == -l:
                continue
            letters.append(l)
        es = e_series(tuple(letters), 3, 2)
        for idx, c in es.items():
            assert f_coeff(idx, tuple(letters)) == c


def test_bernoulli_coefficients():
    vals = [bernoulli_b(s) for s in range(6)]
    assert vals == [Fraction(1), Fraction(-1, 2), Fraction(1, 12), Fraction(0),
                    Fraction(-1, 720), Fraction(0)]


def test_holomorphic_normalization_and_invariance():
    for g, L in ((1, 10), (2, 5)):
        grp = default_group(g)
        holo = HolomorphicBasis(grp, L)
        for a in range(1, g + 1):
            c, r = grp.a_circle(a, scale=1.2)
            z, dz = circle_nodes(c, r, 160)
            vals = holo.eval(z)
            for b in range(g):
                per = a_cycle_integral(vals[b], dz)
                assert abs(per - (1.0 if b + 1 == a else 0.0)) < 1e-8


def test_psi_identity_term():
    """In the q -> 0 limit only the identity word survives: psi = (z-w)^-2."""
    grp = default_group(1)
    psi = PsiSeries(grp, 0, 0)
    z = np.array([0.4 + 0.3j])
    w = -0.2 - 0.3j
    vals, _ = psi.psi(z, w)
    assert abs(vals[()][0] - 1.0 / (z[0] - w) ** 2) < 1e-14


def test_psi3_endpoints():
    grp = default_group(1)
    psi = PsiSeries(grp, 8, 2)
    z = np.array([0.1 + 0.5j])
    w = 0.3 - 0.3j
    same, _ = psi.psi3(z, w, w)
    assert all(abs(v[0]) < 1e-14 for v in same.values())


def test_omega_residue_and_pole_free_strings():
    grp = default_group(2)
    om = OmegaFamily(grp, 5, 3, 0.25 - 0.35j)
    z, dz = circle_nodes(om.w, 1e-2, 64)
    vals = om.eval_all(z)
    for s, v in vals.items():
        res = np.sum(v * dz) / (2j * np.pi)
        want = -1.0 if (len(s) == 2 and s[0] == s[1]) else 0.0
        assert abs(res - want) < 1e-7, s


def test_residue_formula_holomorphic():
    grp = default_group(1)
    holo = HolomorphicBasis(grp, 10)
    assert residue_formula_residual(grp, lambda z: holo.eval(z)[0], []) < 1e-10


def test_period_matrix_g2_symmetry():
    grp = default_group(2)
    holo = HolomorphicBasis(grp, 5)
    tau = period_matrix(grp, holo)
    assert abs(tau[0, 1] - tau[1, 0]) < 1e-6


def test_period_matrix_g1_oracle():
    grp = default_group(1)
    holo = HolomorphicBasis(grp, 10)
    tau = period_matrix(grp, holo)
    assert abs(tau[0, 0] - np.log(0.1)) < 1e-9

import itertools
from fractions import Fraction

import pytest

from surfacekz.fmod import (M12AsF, TensorModule, Wedge2, check_exact_sequences,
                            check_gr_decomposition, check_m12_identification,
                            check_prop_alg, check_property_P, check_Y_filtration,
                            graded_dims, module_M_i, module_M_ij, module_M_ijk,
                            module_V)
from surfacekz.lie import t_, x_
from surfacekz.tgn import GradedQuotient


def test_module_M_dims():
    assert graded_dims(module_M_i(1, 1, 1), 3) == [1, 0, 0, 0]
    dims = graded_dims(module_M_i(2, 1, 1), 4)
    # dim M_d = g^{d+1} - g^{d-1} for d >= 1
    assert dims == [2] + [(2 ** (d + 1)) - 2 ** (d - 1) for d in range(1, 5)]
    assert dims == [2, 3, 6, 12, 24]


def test_module_M12_dims_match_F():
    for g in (1, 2):
        dims = graded_dims(module_M_ij(g, 2, 1, 2), 3)
        assert dims == [g ** d for d in range(4)]


def test_module_Mijk_dims():
    # the cover F^(x)3/(x^1+x^2+x^3) identifies with F^(x)2
    dims = graded_dims(module_M_ijk(2, 3, 1, 2, 3), 3)
    assert dims == [sum(2 ** i * 2 ** (d - i) for i in range(d + 1)) for d in range(4)]


def test_V_generator_slice():
    V = module_V(1, 3)
    assert V.dim(0) == 3           # the y's; the t's carry x-degree 1
    assert V.dim(1) == 3
    V2 = module_V(2, 2)
    assert V2.dim(0) == 4


def test_pullback_counit_action():
    m = module_M_i(2, 3, 2)
    gen = m.gen_elem(0)
    for k in (1, 3):
        assert m.reduce(m.act(k, 1, gen), 1) == {}
    assert m.reduce(m.act(2, 1, gen), 1) != {}


def test_m12_action_relations():
    m = module_M_ij(2, 2, 1, 2)
    gen = m.gen_elem(0)
    for a in (1, 2):
        killed = {}
        for k, v in m.act(1, a, gen).items():
            killed[k] = killed.get(k, 0) + v
        for k, v in m.act(2, a, gen).items():
            killed[k] = killed.get(k, 0) + v
        assert m.reduce(killed, 1) == {}


def test_exact_sequences():
    for g, n in ((1, 2), (1, 3), (2, 2), (1, 4)):
        assert check_exact_sequences(g, n, 2)["ok"], (g, n)


def test_gr_decomposition():
    for g, n in ((1, 2), (1, 3), (2, 2)):
        rep = check_gr_decomposition(g, n, 2)
        assert rep["ok"], rep


def test_property_P():
    m = module_M_ij(2, 2, 1, 2)
    for d in range(3):
        assert check_property_P(m, 1, 2, d)["ok"]
    m3 = module_M_ijk(1, 3, 1, 2, 3)
    for d in range(3):
        assert check_property_P(m3, 1, 2, d)["ok"]
    tens = TensorModule(module_M_i(1, 2, 1), module_M_ij(1, 2, 1, 2))
    for d in range(3):
        assert check_property_P(tens, 1, 2, d)["ok"]


def test_property_P_can_fail():
    """M_i alone does not have (P): its x^k-actions for k outside i vanish."""
    m = module_M_i(1, 3, 3)
    rep = check_property_P(m, 1, 2, 0)
    assert not rep["ok"] and rep["counterexample"] is not None


def test_prop_alg_kernels():
    for g, n, d in ((1, 2, 0), (1, 2, 1), (1, 3, 0), (2, 2, 0)):
        rep = check_prop_alg(g, n, 1, 2, d)
        assert rep["ok"], rep


def test_m12_identification():
    for g in (1, 2):
        assert check_m12_identification(g, 3)["ok"]


def test_m12_model_action():
    model = M12AsF(2)
    f = {(0,): Fraction(1)}
    assert model.act(1, 1, f) == {(0, 0): Fraction(1)}
    assert model.act(2, 1, f) == {(0, 0): Fraction(-1)}


def test_Y_filtration():
    assert check_Y_filtration(1, 3, 2)["ok"]
    assert check_Y_filtration(2, 2, 2)["ok"]


def test_omega_antisymmetry():
    """S_3 acts on the class of [t_12, t_13] by the sign character."""
    q = GradedQuotient(1, 3, 2, 2)
    fl = q.lie

    def omega_class(i, j, k):
        return q.reduce(fl.bracket(fl.gen(t_(i, j)), fl.gen(t_(i, k))))

    base = omega_class(1, 2, 3)
    assert base, "the generator class must be nonzero"

    def sign(perm):
        s = 1
        for a, b in itertools.combinations(range(3), 2):
            if perm[a] > perm[b]:
                s = -s
        return s

    for perm in itertools.permutations((1, 2, 3)):
        img = omega_class(*perm)
        eps = sign(perm)
        diff = dict(img)
        for m, c in base.items():
            diff[m] = diff.get(m, 0) - eps * c
        assert not any(diff.values()), perm


def test_wedge_action_leibniz():
    V = module_V(1, 2)
    W = Wedge2(V)
    u = V.reduce(V.ygen(1, 1), 0)
    v = V.reduce(V.tgen(1, 2), 1)
    wv = W.wedge_coords(u, 0, v, 1)
    img = W.act(1, 1, wv, 1)
    # x . (y ^ t) = (x y) ^ t + y ^ (x t); both reduce inside V first
    lhs = {}
    xu = V.reduce(V.act(1, 1, u), 1)
    for key, c in W.wedge_coords(xu, 1, v, 1).items():
        lhs[key] = lhs.get(key, 0) + c
    xv = V.reduce(V.act(1, 1, v), 2)
    for key, c in W.wedge_coords(u, 0, xv, 2).items():
        lhs[key] = lhs.get(key, 0) + c
    assert {k: v2 for k, v2 in lhs.items() if v2} == img

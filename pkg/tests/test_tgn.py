import json
import random
from fractions import Fraction

import pytest

from surfacekz.lie import lie_add, lie_scale, t_, x_, y_
from surfacekz.tgn import (GradedQuotient, SimplicialMap, SliceCapError,
                           TruncationError, ad_power, check_coproduct,
                           check_derived_relations, check_semidirect)


@pytest.fixture(scope="module")
def q12():
    return GradedQuotient(1, 2, 2, 2)


@pytest.fixture(scope="module")
def q13():
    return GradedQuotient(1, 3, 2, 2)


def test_dims_g1_n1():
    q = GradedQuotient(1, 1, 3, 3)
    table = q.hilbert_table()
    assert table[(1, 0)] == 1 and table[(0, 1)] == 1
    assert table[(1, 1)] == 0
    assert all(v == 0 for k, v in table.items() if sum(k) > 2)


def test_dims_g1_n2(q12):
    assert q12.slice_dim(1, 1) == 1
    assert q12.slice_dim(2, 0) == 0
    # the (1,1) class is spanned by t_12 and [x^i, y^i] = -t_12
    fl = q12.lie
    tcls = q12.reduce(fl.gen(t_(1, 2)))
    for i in (1, 2):
        xy = fl.bracket(fl.gen(x_(1, i)), fl.gen(y_(1, i)))
        assert q12.reduce(xy) == {w: -c for w, c in tcls.items()}
    for i, j in ((1, 2), (2, 1)):
        xy = fl.bracket(fl.gen(x_(1, i)), fl.gen(y_(1, j)))
        assert q12.reduce(xy) == tcls


def test_dims_g2_n1():
    q = GradedQuotient(2, 1, 3, 1)
    assert q.slice_dim(1, 0) == 2
    # degree-3 slice of the free Lie algebra on two letters
    assert q.slice_dim(3, 0) == 2


def test_reduce_examples(q12):
    fl = q12.lie
    # t_21 representative: [x^2, y^1] maps to t_12
    rep = fl.bracket(fl.gen(x_(1, 2)), fl.gen(y_(1, 1)))
    assert q12.reduce(lie_add(rep, fl.gen(t_(1, 2)), -1)) == {}
    # [x^1 + x^2, t_12] = 0
    v = lie_add(fl.gen(x_(1, 1)), fl.gen(x_(1, 2)))
    assert q12.reduce(fl.bracket(v, fl.gen(t_(1, 2)))) == {}
    # a surviving generator reduces to a unit coordinate
    assert q12.reduce(fl.gen(x_(1, 1))) == {(fl.index[x_(1, 1)],): Fraction(1)}


def test_reduce_is_projection_and_lie_map(q13):
    fl = q13.lie
    rng = random.Random(2)
    gens = [fl.gen(s) for s in fl.symbols]
    for _ in range(12):
        a = rng.choice(gens)
        b = rng.choice(gens)
        red = q13.reduce(fl.bracket(a, b))
        # reduce o reduce = reduce
        assert q13.reduce(red) == red
        # reduce is a Lie map: bracket of reductions reduces equally
        ra, rb = q13.reduce(a), q13.reduce(b)
        assert q13.bracket_reduced(ra, rb) == red


def test_ideal_stability(q12):
    """Bracketing a relation with any generator stays in the ideal."""
    fl = q12.lie
    for rel in q12.presentation.relations:
        for s in fl.symbols:
            img = fl.bracket(fl.gen(s), rel)
            if not img:
                continue
            try:
                assert q12.reduce(img) == {}
            except TruncationError:
                pass


def test_truncation_error(q12):
    fl = q12.lie
    big = ad_power(fl, x_(1, 1), fl.gen(y_(1, 1)), 3)  # bidegree (3,1)
    with pytest.raises(TruncationError):
        q12.reduce(big)


def test_slice_cap():
    with pytest.raises(SliceCapError):
        GradedQuotient(2, 2, 2, 2, slice_cap=3)


def test_derived_relations_families(q13):
    rep = check_derived_relations(q13)
    assert rep["ok"] and rep["instances"] > 0
    q22 = GradedQuotient(2, 2, 2, 2)
    assert check_derived_relations(q22)["ok"]


def test_derived_relation_instances_explicit(q13):
    fl = q13.lie
    # [t_12, t_13 + t_23] = 0
    e = fl.bracket(fl.gen(t_(1, 2)), lie_add(fl.gen(t_(1, 3)), fl.gen(t_(2, 3))))
    assert q13.reduce(e) == {}
    # [y^1 + y^2, t_12] = 0
    v = lie_add(fl.gen(y_(1, 1)), fl.gen(y_(1, 2)))
    assert q13.reduce(fl.bracket(v, fl.gen(t_(1, 2)))) == {}


def test_t12_t34_vanishes():
    q = GradedQuotient(1, 4, 2, 2)
    fl = q.lie
    assert q.reduce(fl.bracket(fl.gen(t_(1, 2)), fl.gen(t_(3, 4)))) == {}
    assert check_derived_relations(q)["ok"]


def test_semidirect(q12, q13):
    assert check_semidirect(q12)["ok"]
    assert check_semidirect(q13)["ok"]
    q21 = GradedQuotient(2, 1, 3, 1)
    assert check_semidirect(q21)["ok"]


def test_simplicial_generator_images(q13):
    sm = SimplicialMap(q13)
    src = sm.source.lie
    fl = q13.lie
    # (t_12)^{12,3} = t_13 + t_23 mod C t_12
    img = sm.image(src.gen(t_(1, 2)))
    want = lie_add(fl.gen(t_(1, 3)), fl.gen(t_(2, 3)))
    assert sm.reduce_mod_line(lie_add(img, want, -1)) == {}
    # (x^1)^{12,3} = x^1 + x^2
    img = sm.image(src.gen(x_(1, 1)))
    want = lie_add(fl.gen(x_(1, 1)), fl.gen(x_(1, 2)))
    assert sm.reduce_mod_line(lie_add(img, want, -1)) == {}
    # (x^2)^{12,3} = x^3
    img = sm.image(src.gen(x_(1, 2)))
    assert sm.reduce_mod_line(lie_add(img, fl.gen(x_(1, 3)), -1)) == {}


def test_simplicial_tkl_shift():
    q = GradedQuotient(1, 4, 2, 2)
    sm = SimplicialMap(q)
    src = sm.source.lie
    fl = q.lie
    img = sm.image(src.gen(t_(2, 3)))
    assert sm.reduce_mod_line(lie_add(img, fl.gen(t_(3, 4)), -1)) == {}


def test_simplicial_well_defined(q12, q13):
    assert SimplicialMap(q12).check_well_defined()["ok"]
    assert SimplicialMap(q13).check_well_defined()["ok"]


def test_simplicial_respects_brackets(q13):
    sm = SimplicialMap(q13)
    src = sm.source.lie
    rng = random.Random(7)
    gens = list(src.symbols)
    for _ in range(10):
        s1, s2 = rng.choice(gens), rng.choice(gens)
        a, b = src.gen(s1), src.gen(s2)
        lhs = sm.image(src.bracket(a, b))
        rhs = q13.lie.bracket(sm.image(a), sm.image(b))
        assert sm.reduce_mod_line(lie_add(lhs, rhs, -1)) == {}


def test_coproduct_lemma(q12):
    assert check_coproduct(q12, 1, 1)["ok"]
    assert check_coproduct(q12, 1, 2)["ok"]
    q = GradedQuotient(1, 2, 3, 1)
    rep = check_coproduct(q, 1, 3)
    assert rep["ok"] and rep["expected_nonzero"]


def test_degenerate_n0_and_n1():
    q0 = GradedQuotient(1, 0, 2, 2)
    assert q0.reduce({}) == {}
    q1 = GradedQuotient(1, 1, 2, 2)
    fl = q1.lie
    # sum_a [x_a, y_a] = 0 with the empty t-side
    assert q1.reduce(fl.bracket(fl.gen(x_(1, 1)), fl.gen(y_(1, 1)))) == {}


def test_dump_schema(q12):
    payload = q12.dump()
    assert set(payload) == {"g", "n", "Pmax", "Qmax", "slices"}
    assert all(set(s) == {"p", "q", "dim", "basis"} for s in payload["slices"])
    json.dumps(payload)  # serializable as-is
    entry = {(s["p"], s["q"]): s["dim"] for s in payload["slices"]}
    assert entry[(1, 1)] == 1

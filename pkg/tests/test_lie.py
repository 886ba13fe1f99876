import random
from fractions import Fraction

import pytest

from surfacekz.lie import (FreeLie, GeneratorSymbol, is_lyndon, lie_add,
                           standard_factorization, t_, tensor_commutator,
                           witt_dimension, x_, y_)
from surfacekz.linalg import IntEchelon


def two_letter():
    return FreeLie([x_(1, 1), y_(1, 1)])


def test_generator_symbols():
    assert x_(1, 2).bidegree == (1, 0)
    assert y_(3, 1).bidegree == (0, 1)
    assert t_(2, 1) == t_(1, 2)
    assert t_(1, 2).bidegree == (1, 1)
    with pytest.raises(ValueError):
        t_(2, 2)
    assert sorted([t_(1, 2), y_(1, 1), x_(1, 1)]) == [x_(1, 1), y_(1, 1), t_(1, 2)]


def test_lyndon_basis_degree_one_and_two():
    fl = two_letter()
    assert fl.lyndon_basis(1) == [(0,), (1,)]
    assert fl.lyndon_basis(2) == [(0, 1)]
    assert len(fl.lyndon_basis(5)) == 6
    with pytest.raises(ValueError):
        fl.lyndon_basis(0)


def test_witt_formula_against_enumeration():
    for k in range(2, 9):
        fl = FreeLie([x_(a, 1) for a in range(1, k + 1)])
        for d in range(1, 7):
            assert len(fl.lyndon_basis(d)) == witt_dimension(k, d)


def test_bracket_examples():
    fl = two_letter()
    x = fl.gen(x_(1, 1))
    y = fl.gen(y_(1, 1))
    assert fl.bracket(x, x) == {}
    xy = fl.bracket(x, y)
    assert xy == {(0, 1): Fraction(1)}
    # [[x,y],x] = -[x,[x,y]]
    b = fl.bracket(xy, x)
    assert b == {(0, 0, 1): Fraction(-1)}


def random_element(fl, words, rng, terms=3):
    out = {}
    for _ in range(terms):
        w = rng.choice(words)
        out[w] = out.get(w, 0) + Fraction(rng.randint(-3, 3))
    return {w: c for w, c in out.items() if c}


def test_antisymmetry_and_jacobi_random():
    fl = FreeLie([x_(1, 1), x_(2, 1), y_(1, 1)])
    rng = random.Random(11)
    words = [w for d in range(1, 4) for w in fl.lyndon_basis(d)]
    for _ in range(25):
        p = random_element(fl, words, rng)
        q = random_element(fl, words, rng)
        r = random_element(fl, words, rng)
        assert fl.bracket(p, q) == {w: -c for w, c in fl.bracket(q, p).items()}
        jac = fl.bracket(p, fl.bracket(q, r))
        jac = lie_add(jac, fl.bracket(q, fl.bracket(r, p)))
        jac = lie_add(jac, fl.bracket(r, fl.bracket(p, q)))
        assert jac == {}


def test_jacobi_exhaustive_two_letters():
    fl = two_letter()
    monos = [w for d in range(1, 5) for w in fl.lyndon_basis(d)]
    for m1 in monos:
        for m2 in monos:
            for m3 in monos:
                if len(m1) + len(m2) + len(m3) > 6:
                    continue
                e1, e2, e3 = ({m: Fraction(1)} for m in (m1, m2, m3))
                jac = fl.bracket(e1, fl.bracket(e2, e3))
                jac = lie_add(jac, fl.bracket(e2, fl.bracket(e3, e1)))
                jac = lie_add(jac, fl.bracket(e3, fl.bracket(e1, e2)))
                assert jac == {}, (m1, m2, m3)


def test_normal_form_idempotent():
    fl = FreeLie([x_(1, 1), y_(1, 1), t_(1, 2)])
    rng = random.Random(5)
    words = [w for d in range(1, 4) for w in fl.lyndon_basis(d)]
    for _ in range(20):
        e = random_element(fl, words, rng)
        again = fl.coords_from_tensor(fl.element_to_tensor(e))
        assert again == e


def test_extraction_against_matrix_solve():
    """Independent oracle: solve exactly against the expansion matrix of the
    Lyndon basis instead of greedy triangular peeling."""
    fl = FreeLie([x_(1, 1), x_(2, 1), y_(1, 1)])
    rng = random.Random(3)
    for degree in (2, 3, 4):
        basis = fl.lyndon_basis(degree)
        words = sorted({w for m in basis for w in fl.expand(m)})
        windex = {w: i for i, w in enumerate(words)}
        for trial in range(5):
            coeffs = [Fraction(rng.randint(-4, 4)) for _ in basis]
            tensor = {}
            for m, c in zip(basis, coeffs):
                for w, cc in fl.expand(m).items():
                    tensor[w] = tensor.get(w, 0) + c * cc
            tensor = {w: c for w, c in tensor.items() if c}
            # primary path
            got = fl.coords_from_tensor(tensor)
            want = {m: c for m, c in zip(basis, coeffs) if c}
            assert got == want
            # oracle path: exact augmented elimination
            ech = IntEchelon()
            rows = []
            for m in basis:
                rows.append({windex[w]: c for w, c in fl.expand(m).items()})
            aug = len(words)
            for i, row in enumerate(rows):
                r = dict(row)
                r[aug + i] = Fraction(1)
                ech.insert(r)
            target = {windex[w]: c for w, c in tensor.items()}
            res = ech.reduce(target)
            sol = {basis[i - aug]: -c for i, c in res.items() if i >= aug}
            assert {m: c for m, c in sol.items() if c} == want


def test_bracket_agrees_with_tensor_commutator():
    fl = FreeLie([x_(1, 1), y_(1, 1)])
    rng = random.Random(9)
    words = [w for d in range(1, 4) for w in fl.lyndon_basis(d)]
    for _ in range(15):
        p = random_element(fl, words, rng)
        q = random_element(fl, words, rng)
        direct = fl.element_to_tensor(fl.bracket(p, q))
        oracle = tensor_commutator(fl.element_to_tensor(p), fl.element_to_tensor(q))
        assert direct == oracle


def test_standard_factorization():
    assert standard_factorization((0, 0, 1, 0, 1)) == ((0, 0, 1), (0, 1))
    assert is_lyndon((0, 1, 1))
    assert not is_lyndon((1, 0))
    assert not is_lyndon((0, 1, 0, 1))


def test_bidegree_slices():
    fl = FreeLie([x_(1, 1), y_(1, 1), x_(1, 2), y_(1, 2), t_(1, 2)])
    sl = fl.bidegree_slice(1, 1)
    # four mixed x-y words plus the t letter
    assert len(sl) == 5
    assert all(fl.word_bidegree(w) == (1, 1) for w in sl)

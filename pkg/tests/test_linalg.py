from fractions import Fraction

from surfacekz.linalg import IntEchelon, nullspace, rank_of


def test_rank_and_reduce():
    ech = IntEchelon()
    assert ech.insert({0: 1, 1: 1}) == 0
    assert ech.insert({1: 2}) == 1
    assert ech.insert({0: 3, 1: -1}) is None
    assert ech.rank == 2
    assert ech.reduce({0: 5, 1: 7}) == {}
    res = ech.reduce({0: 1, 2: Fraction(1, 3)})
    assert res == {2: Fraction(1, 3)}


def test_pivot_set_is_insertion_order_independent():
    rows = [{0: 1, 1: 1, 2: 1}, {1: 1, 2: 3}, {0: 2, 2: -5}]
    import itertools
    pivots = set()
    for perm in itertools.permutations(rows):
        ech = IntEchelon()
        for r in perm:
            ech.insert(dict(r))
        pivots.add(tuple(ech.pivot_columns()))
        # canonical residuals agree as well
        assert ech.reduce({0: 1, 1: 0, 2: 0, 3: 1})[3] == 1
    assert len(pivots) == 1


def test_rational_rows():
    ech = IntEchelon()
    ech.insert({0: Fraction(1, 2), 1: Fraction(1, 3)})
    assert ech.contains({0: 3, 1: 2})
    assert not ech.contains({0: 3, 1: 1})


def test_nullspace():
    # x0 + x1 = 0, x1 + x2 = 0  ->  kernel spanned by (1, -1, 1)
    basis = nullspace([{0: 1, 1: 1}, {1: 1, 2: 1}], 3)
    assert len(basis) == 1
    v = basis[0]
    assert v[0] == -v[1] == v[2]
    assert rank_of([{0: 1, 1: 1}, {1: 1, 2: 1}, {0: 1, 2: -1}]) == 2

"""The bigraded Lie algebra t_{g,n}, built from its presentation.

Generators x_a^i (bidegree (1,0)), y_a^i (0,1) and t_ij (1,1) with the
relations

    [v^i, w^j] = <v,w> t_ij              (i != j)
    sum_a [x_a^i, y_a^i] = -sum_{j!=i} t_ij
    [v^i, t_jk] = 0                      (i, j, k distinct)

are imposed slice by slice: for each bidegree inside the truncation box the
ideal slice is spanned exactly (integer Gaussian elimination), and the
quotient basis is the set of pivot-free Lyndon monomials.  All checks in
this module are exact; nothing here touches floating point.
"""

from __future__ import annotations

import itertools
from fractions import Fraction

from .lie import (FreeLie, lie_add, lie_scale, standard_factorization, t_,
                  tensor_commutator, witt_dimension, x_, y_)
from .linalg import IntEchelon


class TruncationError(ValueError):
    """An element fell outside the built bidegree box."""


class SliceCapError(MemoryError):
    """A free slice exceeded the configured dimension cap."""


def symplectic_pairing(v, w):
    """<v,w> for basis symbols: <x_a, y_b> = delta_ab, x-x and y-y pair to 0."""
    if v.kind == "x" and w.kind == "y":
        return 1 if v.a == w.a else 0
    if v.kind == "y" and w.kind == "x":
        return -1 if v.a == w.a else 0
    return 0


class TgnPresentation:
    """Generators and defining relations of t_{g,n}."""

    def __init__(self, g, n):
        if g < 1:
            raise ValueError("g must be >= 1")
        if n < 0:
            raise ValueError("n must be >= 0")
        self.g = g
        self.n = n
        symbols = []
        for i in range(1, n + 1):
            for a in range(1, g + 1):
                symbols.append(x_(a, i))
                symbols.append(y_(a, i))
        for i, j in itertools.combinations(range(1, n + 1), 2):
            symbols.append(t_(i, j))
        self.symbols = symbols
        self.lie = FreeLie(symbols) if symbols else None
        self.relations = self._build_relations()

    def _build_relations(self):
        if self.lie is None:
            return []
        fl = self.lie
        g, n = self.g, self.n
        rels = []
        basis_v = lambda i: [x_(a, i) for a in range(1, g + 1)] + [y_(a, i) for a in range(1, g + 1)]
        for i, j in itertools.combinations(range(1, n + 1), 2):
            for v in basis_v(i):
                for w in basis_v(j):
                    rel = fl.bracket(fl.gen(v), fl.gen(w))
                    pair = symplectic_pairing(v, w)
                    if pair:
                        rel = lie_add(rel, lie_scale(fl.gen(t_(i, j)), pair), -1)
                    rels.append(rel)
        for i in range(1, n + 1):
            rel = {}
            for a in range(1, g + 1):
                rel = lie_add(rel, fl.bracket(fl.gen(x_(a, i)), fl.gen(y_(a, i))))
            for j in range(1, n + 1):
                if j != i:
                    rel = lie_add(rel, fl.gen(t_(i, j)))
            rels.append(rel)
        for j, k in itertools.combinations(range(1, n + 1), 2):
            for i in range(1, n + 1):
                if i in (j, k):
                    continue
                for v in basis_v(i):
                    rels.append(fl.bracket(fl.gen(v), fl.gen(t_(j, k))))
        return [r for r in rels if r]


class _Slice:
    __slots__ = ("monomials", "index", "echelon", "basis")

    def __init__(self, monomials):
        self.monomials = monomials
        self.index = {m: c for c, m in enumerate(monomials)}
        self.echelon = IntEchelon()
        self.basis = None

    def finish(self):
        self.basis = [m for c, m in enumerate(self.monomials) if c not in self.echelon.rows]

    @property
    def dim(self):
        return len(self.basis)


def _point_multiset(fl, word):
    pts = []
    for l in word:
        s = fl.symbols[l]
        pts.append(s.i)
        if s.kind == "t":
            pts.append(s.a)
    return tuple(sorted(pts))


class GradedQuotient:
    """t_{g,n} truncated to a bidegree box, with canonical coordinates."""

    def __init__(self, g, n, pmax, qmax, slice_cap=60000, extra_line=None):
        if pmax < 1 or qmax < 1:
            raise ValueError("bounds must be >= 1")
        self.g = g
        self.n = n
        self.pmax = pmax
        self.qmax = qmax
        self.presentation = TgnPresentation(g, n)
        self.lie = self.presentation.lie
        self.slices = {}
        self._bracket_cache = {}
        self._extra_line = extra_line
        if self.lie is None:
            return
        rels_by_bidegree = {}
        for rel in self.presentation.relations:
            comps = self.lie.bidegree_components(rel)
            assert len(comps) == 1, "relations must be bidegree-homogeneous"
            (bd, coords), = comps.items()
            rels_by_bidegree.setdefault(bd, []).append(coords)
        order = sorted(
            ((p, q) for p in range(pmax + 1) for q in range(qmax + 1) if p + q >= 1),
            key=lambda pq: (pq[0] + pq[1], pq),
        )
        for p, q in order:
            self._build_slice(p, q, rels_by_bidegree.get((p, q), ()), slice_cap)

    def _build_slice(self, p, q, relations, slice_cap):
        fl = self.lie
        monomials = fl.bidegree_slice(p, q)
        if len(monomials) > slice_cap:
            raise SliceCapError(
                "free slice (%d,%d) has dimension %d; raise slice_cap to at least %d"
                % (p, q, len(monomials), len(monomials))
            )
        sl = _Slice(monomials)
        rows = [self._coords_to_row(sl, rel) for rel in relations]
        for sym in fl.symbols:
            dp, dq = sym.bidegree
            lower = self.slices.get((p - dp, q - dq))
            if lower is None:
                continue
            gen = fl.gen(sym)
            for pivrow in lower.echelon.rows.values():
                elem = {lower.monomials[c]: Fraction(v) for c, v in pivrow.items()}
                img = fl.bracket(gen, elem)
                if img:
                    rows.append(self._coords_to_row(sl, img))
        if self._extra_line is not None:
            for elem in self._extra_line:
                comps = fl.bidegree_components(elem)
                if (p, q) in comps:
                    rows.append(self._coords_to_row(sl, comps[(p, q)]))
        # multiset-pure rows first: they echelonize blockwise and stay sparse
        def purity(row):
            supports = {_point_multiset(fl, sl.monomials[c]) for c in row}
            return (len(supports) > 1, len(row))
        rows.sort(key=purity)
        for row in rows:
            sl.echelon.insert(row)
        sl.finish()
        self.slices[(p, q)] = sl

    def _coords_to_row(self, sl, coords):
        return {sl.index[w]: c for w, c in coords.items()}

    # -- reduction -------------------------------------------------------

    def slice_dim(self, p, q):
        if self.lie is None:
            return 0
        sl = self.slices.get((p, q))
        if sl is None:
            raise TruncationError("bidegree (%d,%d) outside built box" % (p, q))
        return sl.dim

    def reduce(self, elem):
        """Canonical quotient coordinates of a Lie element.

        Returns a dict mapping basis monomials (Lyndon words) to Fractions.
        Monomials from different bidegrees may appear together; an element
        reduces to {} exactly when it lies in the relation ideal.
        """
        if self.lie is None:
            if elem:
                raise TruncationError("nonzero element of the trivial algebra")
            return {}
        out = {}
        for bd, coords in self.lie.bidegree_components(elem).items():
            sl = self.slices.get(bd)
            if sl is None:
                raise TruncationError("bidegree %r outside built box" % (bd,))
            row = {sl.index[w]: c for w, c in coords.items()}
            res = sl.echelon.reduce(row)
            for c, v in res.items():
                if v:
                    out[sl.monomials[c]] = out.get(sl.monomials[c], 0) + v
        return {w: c for w, c in out.items() if c}

    def is_zero(self, elem):
        return not self.reduce(elem)

    def basis_monomials(self):
        """All quotient basis monomials with their bidegrees, in slice order."""
        out = []
        for (p, q) in sorted(self.slices, key=lambda pq: (pq[0] + pq[1], pq)):
            for m in self.slices[(p, q)].basis:
                out.append(((p, q), m))
        return out

    def bracket_reduced(self, e1, e2):
        """reduce([e1, e2]) for elements given in reduced (or any) coordinates."""
        return self.reduce(self.lie.bracket(e1, e2))

    def bracket_basis(self, m1, m2):
        """Structure constants: reduce([b(m1), b(m2)]) with memoization."""
        key = (m1, m2)
        cached = self._bracket_cache.get(key)
        if cached is None:
            cached = self.reduce(self.lie.bracket({m1: Fraction(1)}, {m2: Fraction(1)}))
            self._bracket_cache[key] = cached
        return cached

    def hilbert_table(self):
        table = {}
        for (p, q), sl in sorted(self.slices.items()):
            table[(p, q)] = sl.dim
        return table

    def dump(self):
        """JSON-ready dimension table with basis monomial strings."""
        slices = []
        for (p, q), sl in sorted(self.slices.items()):
            slices.append({
                "p": p,
                "q": q,
                "dim": sl.dim,
                "basis": [self.lie.monomial_str(m) for m in sl.basis],
            })
        return {"g": self.g, "n": self.n, "Pmax": self.pmax, "Qmax": self.qmax,
                "slices": slices}


def build_quotient(g, n, pmax, qmax, slice_cap=60000):
    return GradedQuotient(g, n, pmax, qmax, slice_cap=slice_cap)


# -- derived relations (the four families of the infinitesimal braid lemma) --

def derived_relation_instances(g, n):
    """All instances of the four derived relation families within (g, n)."""
    pres = TgnPresentation(g, n)
    fl = pres.lie
    instances = []
    for i, j in itertools.permutations(range(1, n + 1), 2):
        a = 1
        # t_ji = t_ij, via the representative [x_a^j, y_a^i] of t_ji
        rep = fl.bracket(fl.gen(x_(a, j)), fl.gen(y_(a, i)))
        instances.append(("t%d%d-t%d%d" % (j, i, i, j),
                          lie_add(rep, fl.gen(t_(i, j)), -1)))
    for i, j, k in itertools.combinations(range(1, n + 1), 3):
        tij, tik, tjk = fl.gen(t_(i, j)), fl.gen(t_(i, k)), fl.gen(t_(j, k))
        instances.append(("[t%d%d,t%d%d+t%d%d]" % (i, j, i, k, j, k),
                          fl.bracket(tij, lie_add(tik, tjk))))
    for (i, j), (k, l) in itertools.combinations(
            itertools.combinations(range(1, n + 1), 2), 2):
        if len({i, j, k, l}) == 4:
            instances.append(("[t%d%d,t%d%d]" % (i, j, k, l),
                              fl.bracket(fl.gen(t_(i, j)), fl.gen(t_(k, l)))))
    for i, j in itertools.combinations(range(1, n + 1), 2):
        for a in range(1, g + 1):
            for mk in (x_, y_):
                v = lie_add(fl.gen(mk(a, i)), fl.gen(mk(a, j)))
                instances.append(("[%s%d^%d+%s%d^%d,t%d%d]"
                                  % (mk(a, i).kind, a, i, mk(a, j).kind, a, j, i, j),
                                  fl.bracket(v, fl.gen(t_(i, j)))))
    return instances


def check_derived_relations(quotient):
    """Reduce every derived-relation instance; all must vanish exactly."""
    failures = []
    checked = 0
    for name, elem in derived_relation_instances(quotient.g, quotient.n):
        try:
            res = quotient.reduce(elem)
        except TruncationError:
            continue
        checked += 1
        if res:
            failures.append(name)
    return {"check": "derived_relations", "g": quotient.g, "n": quotient.n,
            "instances": checked, "failures": failures, "ok": not failures}


def check_semidirect(quotient, pmax=None):
    """Structure checks for t_{g,n} = u x| f_g^+n.

    (a) every pure-x slice (p,0) has the dimension of the degree-p part of
        f_g^+n, and the per-point free Lie monomials reduce to independent
        classes; (b) slices with q >= 1 lie in the kernel of the projection
        killing y and t (definitionally true in the bigraded quotient, so it
        is reported, not recomputed); (c) the section x_a^(i) -> x_a^i
        followed by the projection is the identity on basis monomials.
    """
    g, n = quotient.g, quotient.n
    if pmax is None:
        pmax = quotient.pmax
    tables = {}
    failures = []
    for p in range(1, pmax + 1):
        want = n * witt_dimension(g, p)
        got = quotient.slice_dim(p, 0)
        tables[p] = (got, want)
        if got != want:
            failures.append("dim (%d,0) = %d, expected %d" % (p, got, want))
            continue
        # section: image of the f_g^{+n} Lyndon basis must stay independent
        fl = quotient.lie
        single = FreeLie([x_(a, 1) for a in range(1, g + 1)])
        ech = IntEchelon()
        indexer = {}
        count = 0
        for i in range(1, n + 1):
            lift = {s: fl.gen(x_(s.a, i)) for s in single.symbols}
            for w in single.lyndon_basis(p):
                img = quotient.reduce(_map_monomial(single, w, lift, fl))
                row = {}
                for m, c in img.items():
                    row[indexer.setdefault(m, len(indexer))] = c
                if ech.insert(row) is None:
                    failures.append("section image of point-%d word %r dependent" % (i, w))
                count += 1
        if ech.rank != count or count != want:
            failures.append("section rank %d != %d at degree %d" % (ech.rank, want, p))
    return {"check": "semidirect", "g": g, "n": n, "x_slice_dims": tables,
            "q_positive_definitional": True, "failures": failures, "ok": not failures}


def _map_monomial(src, word, letter_map, target):
    """Image of a source basis monomial under a map sending letters to
    target Lie elements, computed through the tensor algebra."""
    def expand(w):
        if len(w) == 1:
            sym = src.symbols[w[0]]
            return target.element_to_tensor(letter_map[sym])
        u, v = standard_factorization(w)
        return tensor_commutator(expand(u), expand(v))
    return target.coords_from_tensor(expand(word))


class SimplicialMap:
    """The morphism t_{g,n-1} -> t_{g,n} / C t_12, v^1 -> v^1 + v^2, v^k -> v^{k+1}."""

    def __init__(self, quotient_n):
        self.target = quotient_n
        g, n = quotient_n.g, quotient_n.n
        if n < 2:
            raise ValueError("needs n >= 2 marked points in the target")
        self.source = TgnPresentation(g, n - 1)
        fl_t = quotient_n.lie
        lm = {}
        for a in range(1, g + 1):
            lm[x_(a, 1)] = lie_add(fl_t.gen(x_(a, 1)), fl_t.gen(x_(a, 2)))
            lm[y_(a, 1)] = lie_add(fl_t.gen(y_(a, 1)), fl_t.gen(y_(a, 2)))
            for k in range(2, n):
                lm[x_(a, k)] = fl_t.gen(x_(a, k + 1))
                lm[y_(a, k)] = fl_t.gen(y_(a, k + 1))
        for i, j in itertools.combinations(range(1, n), 2):
            if i == 1:
                lm[t_(1, j)] = lie_add(fl_t.gen(t_(1, j + 1)), fl_t.gen(t_(2, j + 1)))
            else:
                lm[t_(i, j)] = fl_t.gen(t_(i + 1, j + 1))
        self.letter_map = lm
        # the line C t_12 sits in bidegree (1,1) only
        t12_class = quotient_n.reduce(fl_t.gen(t_(1, 2)))
        sl = quotient_n.slices[(1, 1)]
        self._mod_line = IntEchelon()
        for row in sl.echelon.rows.values():
            self._mod_line.insert(dict(row))
        if t12_class:
            self._mod_line.insert({sl.index[w]: c for w, c in t12_class.items()})

    def image(self, elem):
        """Image in t_{g,n} (a canonical lift, before taking mod C t_12)."""
        out = {}
        for w, c in elem.items():
            img = _map_monomial(self.source.lie, w, self.letter_map, self.target.lie)
            out = lie_add(out, img, c)
        return out

    def reduce_mod_line(self, elem):
        """Coordinates of a t_{g,n} element in t_{g,n} / (ideal + C t_12)."""
        out = {}
        fl = self.target.lie
        for bd, coords in fl.bidegree_components(elem).items():
            sl = self.target.slices.get(bd)
            if sl is None:
                raise TruncationError("bidegree %r outside built box" % (bd,))
            row = {sl.index[w]: c for w, c in coords.items()}
            ech = self._mod_line if bd == (1, 1) else sl.echelon
            for c, v in ech.reduce(row).items():
                if v:
                    out[sl.monomials[c]] = v
        return out

    def check_well_defined(self):
        """All defining relations of t_{g,n-1} must map to 0 mod C t_12."""
        failures = []
        for k, rel in enumerate(self.source.relations):
            res = self.reduce_mod_line(self.image(rel))
            if res:
                failures.append("relation %d" % k)
        return {"check": "simplicial_well_defined", "g": self.target.g,
                "n": self.target.n, "relations": len(self.source.relations),
                "failures": failures, "ok": not failures}


def ad_power(fl, sym, elem, k):
    for _ in range(k):
        elem = fl.bracket(fl.gen(sym), elem)
    return elem


def check_coproduct(quotient, a, k):
    """Simplicial image of (ad x_a^1)^k y_a^1 against the coproduct lemma.

    For k even or k = 1 the residual must vanish mod C t_12; for odd k >= 3
    the residual equals 2 (ad x_a^1)^(k-1) t_12, which is asserted nonzero.
    """
    smap = SimplicialMap(quotient)
    src = smap.source.lie
    fl = quotient.lie
    lhs = smap.image(ad_power(src, x_(a, 1), src.gen(y_(a, 1)), k))
    rhs = lie_add(ad_power(fl, x_(a, 1), fl.gen(y_(a, 1)), k),
                  ad_power(fl, x_(a, 2), fl.gen(y_(a, 2)), k))
    residual = smap.reduce_mod_line(lie_add(lhs, rhs, -1))
    report = {"check": "coproduct", "g": quotient.g, "n": quotient.n,
              "a": a, "k": k}
    if k == 1 or k % 2 == 0:
        report["ok"] = not residual
        report["residual_terms"] = len(residual)
    else:
        expected = quotient.reduce(
            lie_scale(ad_power(fl, x_(a, 1), fl.gen(t_(1, 2)), k - 1), 2))
        diff = dict(residual)
        for w, c in expected.items():
            diff[w] = diff.get(w, 0) - c
        report["ok"] = bool(expected) and not any(diff.values())
        report["expected_nonzero"] = bool(expected)
    return report

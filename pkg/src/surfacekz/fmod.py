"""Module theory over F^(x)n, F the free associative algebra on x_1..x_g.

Modules are presented by generators and relations and materialized degree by
degree: a degree-d basis is the set of pivot-free monomials of the free cover
after exact elimination of the relation submodule.  Internal degree is
x-word length, with |y| = 0 and |t| = 1 so that every defining relation is
homogeneous.

Monomials of the free cover are pairs (words, gen) where words is an n-tuple
of x-words (letters 0..g-1) acting slotwise on the generator.
"""

from __future__ import annotations

import itertools
from fractions import Fraction
from math import comb

from .lie import lie_add, t_, x_, y_
from .linalg import IntEchelon, nullspace
from .tgn import GradedQuotient


def _prepend(words, k, a):
    lst = list(words)
    lst[k] = (a,) + lst[k]
    return tuple(lst)


def _act_word(slot_words, elem, scale=1):
    """Apply the slotwise left action of an n-tuple of x-words to an element."""
    out = {}
    for (w, gi), c in elem.items():
        neww = tuple(sw + wi for sw, wi in zip(slot_words, w))
        key = (neww, gi)
        v = out.get(key, 0) + scale * c
        if v:
            out[key] = v
        elif key in out:
            del out[key]
    return out


class FnModule:
    """A graded F^(x)n-module given by generators and homogeneous relations."""

    def __init__(self, g, n, gens, relations, name="module", degree_cap=6):
        self.g = g
        self.n = n
        self.gens = list(gens)              # list of (label, xdeg)
        self.relations = list(relations)    # free-cover elements
        self.name = name
        self.degree_cap = degree_cap
        self._slices = {}

    def monomials(self, d):
        """Free-cover monomials of degree d, sorted."""
        out = []
        for gi, (_, gdeg) in enumerate(self.gens):
            rest = d - gdeg
            if rest < 0:
                continue
            for words in self._word_tuples(rest):
                out.append((words, gi))
        return sorted(out)

    def _word_tuples(self, total):
        slots = []
        for comp in _compositions(total, self.n):
            slots.append([list(itertools.product(range(self.g), repeat=c))
                          for c in comp])
        for slot_choices in slots:
            for combo in itertools.product(*slot_choices):
                yield tuple(tuple(w) for w in combo)

    def _slice(self, d):
        if d > self.degree_cap:
            raise ValueError("degree %d above cap %d for %s" % (d, self.degree_cap, self.name))
        sl = self._slices.get(d)
        if sl is not None:
            return sl
        monos = self.monomials(d)
        index = {m: c for c, m in enumerate(monos)}
        ech = IntEchelon()
        for rel in self.relations:
            rdeg = _elem_degree(rel, self.gens)
            rest = d - rdeg
            if rest < 0:
                continue
            for words in self._word_tuples(rest):
                img = _act_word(words, rel)
                ech.insert({index[m]: c for m, c in img.items()})
        basis = [m for c, m in enumerate(monos) if c not in ech.rows]
        sl = (monos, index, ech, basis)
        self._slices[d] = sl
        return sl

    def dim(self, d):
        return len(self._slice(d)[3])

    def basis(self, d):
        return self._slice(d)[3]

    def reduce(self, elem, d):
        """Canonical coordinates of a degree-d element on the slice basis."""
        monos, index, ech, basis = self._slice(d)
        row = {index[m]: c for m, c in elem.items()}
        res = ech.reduce(row)
        return {monos[c]: v for c, v in res.items() if v}

    def coords(self, elem, d):
        basis = self.basis(d)
        pos = {m: k for k, m in enumerate(basis)}
        red = self.reduce(elem, d)
        vec = [Fraction(0)] * len(basis)
        for m, v in red.items():
            vec[pos[m]] = v
        return vec

    def act(self, k, a, elem):
        """x_a^(k) . elem (slot k in 1..n, letter a in 1..g)."""
        out = {}
        for (w, gi), c in elem.items():
            key = (_prepend(w, k - 1, a - 1), gi)
            v = out.get(key, 0) + c
            if v:
                out[key] = v
        return out

    def gen_elem(self, gi):
        blank = tuple(() for _ in range(self.n))
        return {(blank, gi): Fraction(1)}

    def degrees_str(self, dmax):
        return [self.dim(d) for d in range(dmax + 1)]


def _elem_degree(elem, gens):
    degs = {sum(len(w) for w in words) + gens[gi][1] for (words, gi) in elem}
    if len(degs) != 1:
        raise ValueError("relation not homogeneous: degrees %r" % degs)
    return degs.pop()


def _compositions(total, parts):
    if parts == 1:
        yield (total,)
        return
    for first in range(total + 1):
        for rest in _compositions(total - first, parts - 1):
            yield (first,) + rest


# -- the concrete modules of the theory --------------------------------------

def module_M_i(g, n, i, degree_cap=6):
    """Pullback to slot i of M = coker(F -> F^(+g)), generators e_1..e_g."""
    gens = [("e%d" % a, 0) for a in range(1, g + 1)]
    mod = FnModule(g, n, gens, [], name="M_%d" % i, degree_cap=degree_cap)
    rel = {}
    for a in range(1, g + 1):
        rel = _merge(rel, mod.act(i, a, mod.gen_elem(a - 1)))
    rels = [rel]
    for k in range(1, n + 1):
        if k == i:
            continue
        for b in range(1, g + 1):
            for a in range(g):
                rels.append(mod.act(k, b, mod.gen_elem(a)))
    mod.relations = rels
    return mod


def module_M_ij(g, n, i, j, degree_cap=6):
    """Pullback to slots (i,j) of M_12 = F^(x)2 / (x_a x 1 + 1 x x_a)."""
    if i == j:
        raise ValueError("needs two distinct slots")
    mod = FnModule(g, n, [("m", 0)], [], name="M_%d%d" % (i, j), degree_cap=degree_cap)
    rels = []
    for a in range(1, g + 1):
        rels.append(_merge(mod.act(i, a, mod.gen_elem(0)),
                           mod.act(j, a, mod.gen_elem(0))))
    for k in range(1, n + 1):
        if k in (i, j):
            continue
        for b in range(1, g + 1):
            rels.append(mod.act(k, b, mod.gen_elem(0)))
    mod.relations = rels
    return mod


def module_M_ijk(g, n, i, j, k, degree_cap=6):
    """The module with generator omega and relations (x^i+x^j+x^k) omega = 0."""
    if len({i, j, k}) != 3:
        raise ValueError("needs three distinct slots")
    mod = FnModule(g, n, [("w", 0)], [], name="M_%d%d%d" % (i, j, k), degree_cap=degree_cap)
    rels = []
    for a in range(1, g + 1):
        rel = _merge(mod.act(i, a, mod.gen_elem(0)), mod.act(j, a, mod.gen_elem(0)))
        rel = _merge(rel, mod.act(k, a, mod.gen_elem(0)))
        rels.append(rel)
    for l in range(1, n + 1):
        if l in (i, j, k):
            continue
        for b in range(1, g + 1):
            rels.append(mod.act(l, b, mod.gen_elem(0)))
    mod.relations = rels
    return mod


def module_V(g, n, degree_cap=6):
    """The f_g^(+n)-module V = t_{g,n}[1]: generators y_a^i and t_ij.

    Relations: x_a^i . y_b^j = delta_ab t_ij (i != j), (x_a^i + x_a^j) t_ij = 0,
    x_a^k . t_ij = 0 for k outside {i,j}, and the surface relation
    sum_a x_a^i . y_a^i + sum_{j != i} t_ij = 0 coming from R_1.
    """
    gens = [("y%d^%d" % (a, i), 0) for i in range(1, n + 1) for a in range(1, g + 1)]
    tpos = {}
    for i, j in itertools.combinations(range(1, n + 1), 2):
        tpos[(i, j)] = len(gens)
        gens.append(("t%d%d" % (i, j), 1))
    mod = FnModule(g, n, gens, [], name="V", degree_cap=degree_cap)

    def ygen(a, i):
        return mod.gen_elem((i - 1) * g + (a - 1))

    def tgen(i, j):
        return mod.gen_elem(tpos[(min(i, j), max(i, j))])

    rels = []
    for i, j in itertools.permutations(range(1, n + 1), 2):
        for a in range(1, g + 1):
            for b in range(1, g + 1):
                rel = mod.act(i, a, ygen(b, j))
                if a == b:
                    rel = _merge(rel, tgen(i, j), -1)
                rels.append(rel)
    for i, j in itertools.combinations(range(1, n + 1), 2):
        for a in range(1, g + 1):
            rels.append(_merge(mod.act(i, a, tgen(i, j)), mod.act(j, a, tgen(i, j))))
            for k in range(1, n + 1):
                if k not in (i, j):
                    rels.append(mod.act(k, a, tgen(i, j)))
    for i in range(1, n + 1):
        rel = {}
        for a in range(1, g + 1):
            rel = _merge(rel, mod.act(i, a, ygen(a, i)))
        for j in range(1, n + 1):
            if j != i:
                rel = _merge(rel, tgen(i, j))
        rels.append(rel)
    mod.relations = rels
    mod.ygen = ygen
    mod.tgen = tgen
    return mod


def _merge(e1, e2, scale=1):
    out = dict(e1)
    for k, v in e2.items():
        nv = out.get(k, 0) + scale * v
        if nv:
            out[k] = nv
        elif k in out:
            del out[k]
    return out


class Submodule:
    """Degree-sliced submodule of an FnModule generated by given elements."""

    def __init__(self, parent, generators, name="submodule"):
        self.parent = parent
        self.generators = list(generators)  # (element, xdeg) pairs
        self.name = name
        self._slices = {}

    def slice_vectors(self, d):
        sl = self._slices.get(d)
        if sl is not None:
            return sl
        par = self.parent
        basis = par.basis(d)
        pos = {m: k for k, m in enumerate(basis)}
        ech = IntEchelon()
        vectors = []
        for elem, edeg in self.generators:
            rest = d - edeg
            if rest < 0:
                continue
            for words in par._word_tuples(rest):
                img = par.reduce(_act_word(words, elem), d)
                row = {pos[m]: c for m, c in img.items()}
                if ech.insert(dict(row)) is not None:
                    vectors.append(img)
        self._slices[d] = (vectors, ech)
        return self._slices[d]

    def dim(self, d):
        return self.slice_vectors(d)[1].rank


# -- exact sequences ----------------------------------------------------------

def check_exact_sequences(g, n, dmax, degree_cap=None):
    """Rank verification of 0 -> (+)M_ij -> V -> (+)M_i -> 0 and the V_i variant.

    The embedding sends the generator of M_ij to t_ij (an x-degree shift of
    one), the projection kills the t_ij and sends y_a^i to the a-th generator
    of M_i.
    """
    if n < 2:
        raise ValueError("needs n >= 2")
    cap = degree_cap if degree_cap is not None else dmax + 1
    V = module_V(g, n, degree_cap=cap)
    Ms = {i: module_M_i(g, n, i, degree_cap=cap) for i in range(1, n + 1)}
    Mij = {(i, j): module_M_ij(g, n, i, j, degree_cap=cap)
           for i, j in itertools.combinations(range(1, n + 1), 2)}
    failures = []
    dims = {}
    for d in range(dmax + 1):
        vdim = V.dim(d)
        lower = sum(m.dim(d - 1) for m in Mij.values()) if d >= 1 else 0
        upper = sum(m.dim(d) for m in Ms.values())
        dims[d] = {"V": vdim, "sum_Mij": lower, "sum_Mi": upper}
        if vdim != lower + upper:
            failures.append("degree %d: dim V = %d != %d + %d" % (d, vdim, lower, upper))
            continue
        # injectivity of the embedding: rank of images of the M_ij bases
        ech = IntEchelon()
        vb = {m: k for k, m in enumerate(V.basis(d))}
        count = 0
        for (i, j), m in Mij.items():
            if d < 1:
                continue
            for mono in m.basis(d - 1):
                words, _ = mono
                img = V.reduce(_act_word(words, V.tgen(i, j)), d)
                ech.insert({vb[x]: c for x, c in img.items()})
                count += 1
        if ech.rank != count:
            failures.append("degree %d: embedding rank %d < %d" % (d, ech.rank, count))
        # surjectivity of the projection y_a^i -> e_a^(i)
        proj_rank = _projection_rank(V, Ms, g, n, d)
        if proj_rank != upper:
            failures.append("degree %d: projection rank %d != %d" % (d, proj_rank, upper))
    # the V_i sequences
    for i in range(1, n + 1):
        gens = [(V.ygen(a, i), 0) for a in range(1, g + 1)]
        gens += [(V.tgen(i, j), 1) for j in range(1, n + 1) if j != i]
        Vi = Submodule(V, gens, name="V_%d" % i)
        for d in range(dmax + 1):
            vdim = Vi.dim(d)
            lower = sum(Mij[tuple(sorted((i, j)))].dim(d - 1)
                        for j in range(1, n + 1) if j != i) if d >= 1 else 0
            upper = Ms[i].dim(d)
            if vdim != lower + upper:
                failures.append("V_%d degree %d: %d != %d + %d" % (i, d, vdim, lower, upper))
    return {"check": "exact_sequences", "g": g, "n": n, "dmax": dmax,
            "dims": dims, "failures": failures, "ok": not failures}


def _projection_rank(V, Ms, g, n, d):
    """Rank of the map V_d -> (+)_i (M_i)_d induced by y_a^i -> e_a, t -> 0."""
    offsets = {}
    total = 0
    for i in range(1, n + 1):
        offsets[i] = total
        total += len(Ms[i].basis(d))
    pos = {i: {m: k for k, m in enumerate(Ms[i].basis(d))} for i in Ms}
    ech = IntEchelon()
    for mono in V.basis(d):
        words, gi = mono
        label = V.gens[gi][0]
        if label.startswith("t"):
            continue
        a = int(label[1:label.index("^")])
        i = int(label[label.index("^") + 1:])
        img = Ms[i].reduce(_act_word(words, Ms[i].gen_elem(a - 1)), d)
        ech.insert({offsets[i] + pos[i][m]: c for m, c in img.items()})
    return ech.rank


# -- graded dimension bookkeeping ---------------------------------------------

def graded_dims(mod, dmax):
    return [mod.dim(d) for d in range(dmax + 1)]


def tensor_dims(dims1, dims2, dmax):
    return [sum(dims1[u] * dims2[d - u] for u in range(d + 1)) for d in range(dmax + 1)]


def wedge2_dims(dims, dmax):
    out = []
    for d in range(dmax + 1):
        total = sum(dims[u] * dims[d - u] for u in range(d + 1) if u < d - u)
        if d % 2 == 0:
            total += comb(dims[d // 2], 2)
        out.append(total)
    return out


def check_gr_decomposition(g, n, dmax, quotient=None):
    """Dimension identity for the filtration of t_{g,n}[q=2] slices.

    dim t[d,2] = sum_i w2(M_i)_d + sum_{i<j} (M tensor M_ij)_{d-1}
                 + sum_{i<j<k} (M_ijk)_{d-2},
    where the shifts record that t_ij has x-degree 1 and the M_ijk generator
    has x-degree 2.  The left side comes from the presented quotient, the
    right side from independent module eliminations.
    """
    if quotient is None:
        quotient = GradedQuotient(g, n, max(dmax, 1), 2)
    cap = dmax + 1
    Mdims = graded_dims(module_M_i(g, n, 1, degree_cap=cap), dmax)
    Mijdims = graded_dims(module_M_ij(g, n, 1, 2, degree_cap=cap), dmax) if n >= 2 else []
    Mijkdims = graded_dims(module_M_ijk(g, n, 1, 2, 3, degree_cap=cap), dmax) if n >= 3 else []
    pairs = n * (n - 1) // 2
    triples = n * (n - 1) * (n - 2) // 6
    w2 = wedge2_dims(Mdims, dmax)
    mm = tensor_dims(Mdims, Mijdims, dmax) if n >= 2 else [0] * (dmax + 1)
    failures = []
    table = {}
    for d in range(dmax + 1):
        left = quotient.slice_dim(d, 2)
        right = n * w2[d]
        if n >= 2 and d >= 1:
            right += pairs * mm[d - 1]
        if n >= 3 and d >= 2:
            right += triples * Mijkdims[d - 2]
        table[d] = (left, right)
        if left != right:
            failures.append("x-degree %d: %d != %d" % (d, left, right))
    return {"check": "gr_decomposition", "g": g, "n": n, "dmax": dmax,
            "dims": table, "failures": failures, "ok": not failures}


# -- property (P) --------------------------------------------------------------

class TensorModule:
    """Tensor product of two FnModules with the diagonal (derivation) action."""

    def __init__(self, m1, m2):
        self.m1 = m1
        self.m2 = m2
        self.g = m1.g
        self.n = m1.n
        self.name = "%s(x)%s" % (m1.name, m2.name)

    def dim(self, d):
        return sum(self.m1.dim(u) * self.m2.dim(d - u) for u in range(d + 1))

    def basis(self, d):
        out = []
        for u in range(d + 1):
            for b1 in self.m1.basis(u):
                for b2 in self.m2.basis(d - u):
                    out.append((u, b1, b2))
        return out

    def act_coords(self, k, a, d):
        """Matrix rows of x_a^(k): basis(d) -> coordinates on basis(d+1)."""
        target = {m: p for p, m in enumerate(self.basis(d + 1))}
        rows = []
        for (u, b1, b2) in self.basis(d):
            row = {}
            img1 = self.m1.reduce(self.m1.act(k, a, {b1: Fraction(1)}), u + 1)
            for m, c in img1.items():
                row[target[(u + 1, m, b2)]] = row.get(target[(u + 1, m, b2)], 0) + c
            img2 = self.m2.reduce(self.m2.act(k, a, {b2: Fraction(1)}), d - u + 1)
            for m, c in img2.items():
                key = target[(u, b1, m)]
                row[key] = row.get(key, 0) + c
            rows.append(row)
        return rows


def _plain_act_coords(mod, k, a, d):
    target = {m: p for p, m in enumerate(mod.basis(d + 1))}
    rows = []
    for b in mod.basis(d):
        img = mod.reduce(mod.act(k, a, {b: Fraction(1)}), d + 1)
        rows.append({target[m]: c for m, c in img.items()})
    return rows


def check_property_P(mod, i, j, d):
    """Injectivity of the property-(P) map for g x g families at degree d.

    The map sends (beta_ab) to all x_c^k beta_ab for k outside {i,j} together
    with the contracted sums over the i and j slots; injectivity is certified
    by an exact kernel computation.
    """
    g, n = mod.g, mod.n
    dim_d = mod.dim(d)
    if isinstance(mod, TensorModule):
        act = {(k, c): mod.act_coords(k, c, d) for k in range(1, n + 1)
               for c in range(1, g + 1)}
    else:
        act = {(k, c): _plain_act_coords(mod, k, c, d) for k in range(1, n + 1)
               for c in range(1, g + 1)}
    ncols = g * g * dim_d

    def col(a, b, v):
        return ((a - 1) * g + (b - 1)) * dim_d + v

    rows = []
    # block (x_c^k . beta_ab) for k != i, j: one constraint row per output coord
    for k in range(1, n + 1):
        if k in (i, j):
            continue
        for c in range(1, g + 1):
            for a in range(1, g + 1):
                for b in range(1, g + 1):
                    out = {}
                    for v in range(dim_d):
                        for tcol, val in act[(k, c)][v].items():
                            out.setdefault(tcol, {})[col(a, b, v)] = val
                    rows.extend(out.values())
    # contracted blocks sum_c x_c^i beta_ca and sum_c x_c^j beta_ac
    for a in range(1, g + 1):
        out = {}
        for c in range(1, g + 1):
            for v in range(dim_d):
                for tcol, val in act[(i, c)][v].items():
                    out.setdefault(tcol, {}).setdefault(col(c, a, v), Fraction(0))
                    out[tcol][col(c, a, v)] += val
        rows.extend(out.values())
    for a in range(1, g + 1):
        out = {}
        for c in range(1, g + 1):
            for v in range(dim_d):
                for tcol, val in act[(j, c)][v].items():
                    out.setdefault(tcol, {}).setdefault(col(a, c, v), Fraction(0))
                    out[tcol][col(a, c, v)] += val
        rows.extend(out.values())
    kernel = nullspace(rows, ncols)
    return {"check": "property_P", "module": mod.name, "i": i, "j": j,
            "degree": d, "family_dim": ncols, "kernel_dim": len(kernel),
            "counterexample": kernel[0] if kernel else None,
            "ok": not kernel}


def check_prop_alg(g, n, i, j, d, quotient=None):
    """Kernel of the bracket-vanishing system of the flatness proposition.

    Solves exactly for g x g families (beta_ab) in the degree-d slice of
    [V_i, V_j] inside t_{g,n}[q=2] subject to (a) commuting with every
    x_c^k for k outside {i,j}, (b) sum_a [x_a^i, beta_ab] = 0, and
    (c) sum_b [x_b^j, beta_ab] = 0.  The expected kernel is zero.
    """
    if quotient is None:
        quotient = GradedQuotient(g, n, d + 2, 2)
    fl = quotient.lie

    def vi_elements(idx, deg):
        """Spanning elements of V_idx at x-degree `deg`, as Lie elements."""
        out = []
        for word in itertools.product(range(1, g + 1), repeat=deg):
            for a in range(1, g + 1):
                e = fl.gen(y_(a, idx))
                for c in reversed(word):
                    e = fl.bracket(fl.gen(x_(c, idx)), e)
                out.append(e)
        if deg >= 1:
            for word in itertools.product(range(1, g + 1), repeat=deg - 1):
                for jj in range(1, n + 1):
                    if jj == idx:
                        continue
                    e = fl.gen(t_(idx, jj))
                    for c in reversed(word):
                        e = fl.bracket(fl.gen(x_(c, idx)), e)
                    out.append(e)
        return [e for e in out if e]

    # basis of the degree-d slice of [V_i, V_j] in quotient coordinates
    slice_monos = quotient.slices[(d, 2)].basis
    pos = {m: k for k, m in enumerate(slice_monos)}
    span = IntEchelon()
    span_vectors = []
    for du in range(d + 1):
        dv = d - du
        for u in vi_elements(i, du):
            for v in vi_elements(j, dv):
                red = quotient.bracket_reduced(u, v)
                if not red:
                    continue
                row = {pos[m]: c for m, c in red.items()}
                if span.insert(dict(row)) is not None:
                    span_vectors.append(red)
    span_dim = len(span_vectors)
    # unknowns: g*g families of coefficients on the span vectors
    ncols = g * g * span_dim

    def col(a, b, v):
        return ((a - 1) * g + (b - 1)) * span_dim + v

    target_sl = quotient.slices[(d + 1, 2)]
    tpos = {m: k for k, m in enumerate(target_sl.basis)}
    bracket_x = {}
    for c in range(1, g + 1):
        for k in range(1, n + 1):
            for v, vec in enumerate(span_vectors):
                img = quotient.bracket_reduced(fl.gen(x_(c, k)), vec)
                bracket_x[(c, k, v)] = img
    rows = []
    for k in range(1, n + 1):
        if k in (i, j):
            continue
        for c in range(1, g + 1):
            for a in range(1, g + 1):
                for b in range(1, g + 1):
                    out = {}
                    for v in range(span_dim):
                        for m, val in bracket_x[(c, k, v)].items():
                            out.setdefault(tpos[m], {})[col(a, b, v)] = val
                    rows.extend(out.values())
    for b in range(1, g + 1):
        out = {}
        for a in range(1, g + 1):
            for v in range(span_dim):
                for m, val in bracket_x[(a, i, v)].items():
                    cell = out.setdefault(tpos[m], {})
                    cell[col(a, b, v)] = cell.get(col(a, b, v), 0) + val
        rows.extend(out.values())
    for a in range(1, g + 1):
        out = {}
        for b in range(1, g + 1):
            for v in range(span_dim):
                for m, val in bracket_x[(b, j, v)].items():
                    cell = out.setdefault(tpos[m], {})
                    cell[col(a, b, v)] = cell.get(col(a, b, v), 0) + val
        rows.extend(out.values())
    kernel = nullspace(rows, ncols)
    return {"check": "prop_alg", "g": g, "n": n, "i": i, "j": j, "degree": d,
            "span_dim": span_dim, "unknowns": ncols, "kernel_dim": len(kernel),
            "ok": not kernel}


# -- the antipode model of M_12 and the Y filtration --------------------------

class M12AsF:
    """F with the twisted F^(x)2-action (u (x) v) . f = u f S(v).

    The antipode S is the anti-automorphism x_a -> -x_a, so the second slot
    acts by signed right concatenation.  Degree-d basis: all x-words of
    length d.
    """

    def __init__(self, g):
        self.g = g

    def basis(self, d):
        return [tuple(w) for w in itertools.product(range(self.g), repeat=d)]

    def dim(self, d):
        return self.g ** d

    def act(self, slot, a, elem):
        out = {}
        for w, c in elem.items():
            if slot == 1:
                key, val = (a - 1,) + w, c
            else:
                key, val = w + (a - 1,), -c
            out[key] = out.get(key, 0) + val
        return {k: v for k, v in out.items() if v}


def check_m12_identification(g, dmax):
    """The presented M_12 matches F with the antipode-twisted action.

    The identification sends the class of u (x) v to u S(v); we verify it is
    a degree-preserving bijection intertwining both slot actions.
    """
    mod = module_M_ij(g, 2, 1, 2, degree_cap=dmax + 1)
    model = M12AsF(g)
    failures = []

    def to_model(elem):
        out = {}
        for ((w1, w2), _), c in elem.items():
            sign = -1 if len(w2) % 2 else 1
            key = w1 + tuple(reversed(w2))
            out[key] = out.get(key, 0) + sign * c
        return {k: v for k, v in out.items() if v}

    for d in range(dmax + 1):
        if mod.dim(d) != model.dim(d):
            failures.append("degree %d: dim %d != %d" % (d, mod.dim(d), model.dim(d)))
            continue
        ech = IntEchelon()
        images = []
        for b in mod.basis(d):
            img = to_model({b: Fraction(1)})
            images.append((b, img))
            ech.insert({_windex(w, g): c for w, c in img.items()})
        if ech.rank != mod.dim(d):
            failures.append("degree %d: identification not bijective" % d)
        if d < dmax:
            for slot in (1, 2):
                for a in range(1, g + 1):
                    for b, img in images:
                        lhs = to_model(mod.reduce(mod.act(slot, a, {b: Fraction(1)}), d + 1))
                        rhs = model.act(slot, a, img)
                        if _merge(lhs, rhs, -1):
                            failures.append("degree %d: action x_%d^(%d) mismatch" % (d, a, slot))
    return {"check": "m12_identification", "g": g, "dmax": dmax,
            "failures": failures, "ok": not failures}


def _windex(word, g):
    idx = 0
    for a in word:
        idx = idx * g + a + 1
    return idx


class Wedge2:
    """Lambda^2 of an FnModule with the derivation action of F^(x)n."""

    def __init__(self, V):
        self.V = V
        self.g = V.g
        self.n = V.n

    def basis(self, D):
        out = []
        for d1 in range(D + 1):
            d2 = D - d1
            if d1 > d2:
                continue
            b1 = self.V.basis(d1)
            b2 = self.V.basis(d2)
            if d1 == d2:
                for p in range(len(b1)):
                    for q in range(p + 1, len(b1)):
                        out.append(((d1, p), (d2, q)))
            else:
                for p in range(len(b1)):
                    for q in range(len(b2)):
                        out.append(((d1, p), (d2, q)))
        return out

    def wedge_coords(self, u_red, du, v_red, dv):
        """Coordinates of u ^ v on the degree-(du+dv) wedge basis."""
        posu = {m: k for k, m in enumerate(self.V.basis(du))}
        posv = {m: k for k, m in enumerate(self.V.basis(dv))}
        out = {}
        for mu, cu in u_red.items():
            for mv, cv in v_red.items():
                k1 = (du, posu[mu])
                k2 = (dv, posv[mv])
                if k1 == k2:
                    continue
                if k1 < k2:
                    key, s = (k1, k2), 1
                else:
                    key, s = (k2, k1), -1
                val = out.get(key, 0) + s * cu * cv
                if val:
                    out[key] = val
                elif key in out:
                    del out[key]
        return out

    def act(self, k, a, elem, D):
        """x_a^(k) . elem for a degree-D wedge element, via the Leibniz rule."""
        V = self.V
        out = {}
        for ((d1, p), (d2, q)), c in elem.items():
            m1 = V.basis(d1)[p]
            m2 = V.basis(d2)[q]
            img1 = V.reduce(V.act(k, a, {m1: Fraction(1)}), d1 + 1)
            w = self.wedge_coords(img1, d1 + 1, {m2: Fraction(1)}, d2)
            for key, v in w.items():
                out[key] = out.get(key, 0) + c * v
            img2 = V.reduce(V.act(k, a, {m2: Fraction(1)}), d2 + 1)
            w = self.wedge_coords({m1: Fraction(1)}, d1, img2, d2 + 1)
            for key, v in w.items():
                out[key] = out.get(key, 0) + c * v
        return {k_: v for k_, v in out.items() if v}


def check_Y_filtration(g, n, Dmax):
    """Dimensions of Y_0 c Y_1 c Y inside Lambda^2(V) against the gr formulas.

    Y is the submodule generated by the degree-2 relation family; the
    filtration comes from V_0 = (t_ij-span).  Expected graded dimensions:
    gr_2 = sum M_i (x) M_j, gr_1 = sum over pairs of (n-1) copies of
    M (x) M_ij, gr_0 = four-index products plus (3 copies of M_12 (x) M_12
    minus M_ijk) per triple.
    """
    cap = Dmax + 1
    V = module_V(g, n, degree_cap=cap)
    W = Wedge2(V)
    Mdims = graded_dims(module_M_i(g, n, 1, degree_cap=cap), Dmax)
    Mijdims = graded_dims(module_M_ij(g, n, 1, 2, degree_cap=cap), Dmax)
    Mijkdims = graded_dims(module_M_ijk(g, n, 1, 2, 3, degree_cap=cap), Dmax) if n >= 3 else [0] * (Dmax + 1)
    pairs = list(itertools.combinations(range(1, n + 1), 2))
    y_gens = []
    for i, j in pairs:
        for a in range(1, g + 1):
            for b in range(1, g + 1):
                u = V.reduce(V.ygen(a, i), 0)
                v = V.reduce(V.ygen(b, j), 0)
                y_gens.append((W.wedge_coords(u, 0, v, 0), 0))
    for i, j in pairs:
        tred = V.reduce(V.tgen(i, j), 1)
        for a in range(1, g + 1):
            u = _merge(V.reduce(V.ygen(a, i), 0), V.reduce(V.ygen(a, j), 0))
            y_gens.append((W.wedge_coords(u, 0, tred, 1), 1))
            for k in range(1, n + 1):
                if k not in (i, j):
                    y_gens.append((W.wedge_coords(V.reduce(V.ygen(a, k), 0), 0, tred, 1), 1))
    for i, j, k in itertools.combinations(range(1, n + 1), 3):
        tij = V.reduce(V.tgen(i, j), 1)
        u = _merge(V.reduce(V.tgen(i, k), 1), V.reduce(V.tgen(j, k), 1))
        y_gens.append((W.wedge_coords(tij, 1, u, 1), 2))
    for (i, j), (k, l) in itertools.combinations(pairs, 2):
        if len({i, j, k, l}) == 4:
            y_gens.append((W.wedge_coords(V.reduce(V.tgen(i, j), 1), 1,
                                          V.reduce(V.tgen(k, l), 1), 1), 2))

    def span_slices(gens, D):
        """Action-closure of the generators in wedge degree D."""
        pos = {m: k for k, m in enumerate(W.basis(D))}
        ech = IntEchelon()
        vecs = []
        frontier = [(e, d) for e, d in gens if d == D and e]
        for e, _ in frontier:
            row = {pos[m]: c for m, c in e.items()}
            if ech.insert(row) is not None:
                vecs.append(e)
        lower = [(e, d) for e, d in gens if d < D and e]
        while lower:
            nxt = []
            for e, d in lower:
                for k in range(1, n + 1):
                    for a in range(1, g + 1):
                        img = W.act(k, a, e, d)
                        if not img:
                            continue
                        if d + 1 == D:
                            row = {pos[m]: c for m, c in img.items()}
                            if ech.insert(row) is not None:
                                vecs.append(img)
                        else:
                            nxt.append((img, d + 1))
            lower = nxt
        return ech, vecs

    # V0 slices (the t-span) for the filtration
    V0 = Submodule(V, [(V.tgen(i, j), 1) for i, j in pairs], name="V0")
    failures = []
    table = {}
    for D in range(Dmax + 1):
        pos = {m: k for k, m in enumerate(W.basis(D))}
        Yech, _ = span_slices(y_gens, D)
        dimY = Yech.rank
        # X0 = Lambda^2 V0, X1 = V0 ^ V at degree D
        x0 = IntEchelon()
        x1 = IntEchelon()
        y0 = IntEchelon()
        y1 = IntEchelon()
        for d1 in range(D + 1):
            v0a, _ = V0.slice_vectors(d1)
            for d2 in range(D - d1 + 1):
                if d1 + d2 != D:
                    continue
                v0b, _ = V0.slice_vectors(d2)
                for u in v0a:
                    for v in v0b:
                        wv = W.wedge_coords(u, d1, v, d2)
                        if wv:
                            x0.insert({pos[m]: c for m, c in wv.items()})
                    for m2 in V.basis(d2):
                        wv = W.wedge_coords(u, d1, {m2: Fraction(1)}, d2)
                        if wv:
                            x1.insert({pos[m]: c for m, c in wv.items()})
        # Y_i = Y  intersect  X_i, via dim(A+B) = dimA + dimB - dim(A cap B)
        for target, ech in ((x0, y0), (x1, y1)):
            joint = IntEchelon()
            for row in target.rows.values():
                joint.insert(dict(row))
            for row in Yech.rows.values():
                joint.insert(dict(row))
            ech.rank_value = target.rank + dimY - joint.rank
        dimY0, dimY1 = y0.rank_value, y1.rank_value
        gr2 = sum(tensor_dims(Mdims, Mdims, Dmax)[D] for _ in pairs)
        gr1 = sum((n - 1) * tensor_dims(Mdims, Mijdims, Dmax)[D - 1] if D >= 1 else 0
                  for _ in pairs)
        gr0 = 0
        if D >= 2:
            mm = tensor_dims(Mijdims, Mijdims, Dmax)[D - 2]
            four = [pq for pq in itertools.combinations(pairs, 2)
                    if len(set(pq[0]) | set(pq[1])) == 4]
            gr0 += len(four) * mm
            ntrip = n * (n - 1) * (n - 2) // 6
            gr0 += ntrip * (3 * mm - Mijkdims[D - 2])
        table[D] = {"Y": dimY, "Y1": dimY1, "Y0": dimY0,
                    "gr2": gr2, "gr1": gr1, "gr0": gr0}
        if dimY - dimY1 != gr2 or dimY1 - dimY0 != gr1 or dimY0 != gr0:
            failures.append("degree %d: %r" % (D, table[D]))
    return {"check": "Y_filtration", "g": g, "n": n, "Dmax": Dmax,
            "table": table, "failures": failures, "ok": not failures}

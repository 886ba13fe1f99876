"""Exact free Lie algebra arithmetic over a bigraded generator alphabet.

Elements are stored in the Lyndon basis: each basis monomial is the standard
bracketing of a Lyndon word over the alphabet, and coefficients are exact
rationals.  Brackets are computed by expanding into the free associative
algebra (where the commutator is unambiguous) and re-extracting Lyndon
coordinates by triangularity; this keeps the normal form canonical and makes
every reduction exactly reproducible.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache


_KIND_RANK = {"x": 0, "y": 1, "t": 2}


@dataclass(frozen=True)
class GeneratorSymbol:
    """A generator x_a^i, y_a^i or t_{ij} with its bidegree.

    The sort order (x < y < t, then point index, then handle index) is the
    total order used for Lyndon words; it is fixed so bases are stable
    across runs.
    """

    kind: str  # "x", "y" or "t"
    i: int     # point index (for t: the smaller point index)
    a: int     # handle index (for t: the larger point index)

    def __post_init__(self):
        if self.kind not in ("x", "y", "t"):
            raise ValueError("kind must be x, y or t")
        if self.kind == "t" and not self.i < self.a:
            raise ValueError("t symbols are stored with i < j only")

    @property
    def sort_key(self):
        return (_KIND_RANK[self.kind], self.i, self.a)

    def __lt__(self, other):
        return self.sort_key < other.sort_key

    @property
    def bidegree(self):
        if self.kind == "x":
            return (1, 0)
        if self.kind == "y":
            return (0, 1)
        return (1, 1)

    def __str__(self):
        if self.kind == "t":
            return "t%d%d" % (self.i, self.a)
        return "%s%d^%d" % (self.kind, self.a, self.i)


def x_(a, i):
    return GeneratorSymbol("x", i, a)


def y_(a, i):
    return GeneratorSymbol("y", i, a)


def t_(i, j):
    if i == j:
        raise ValueError("t requires distinct points")
    return GeneratorSymbol("t", min(i, j), max(i, j))


def witt_dimension(k, d):
    """Dimension of the degree-d part of the free Lie algebra on k letters.

    Necklace-counting formula (1/d) sum_{e|d} mu(e) k^(d/e).
    """
    if d < 1:
        raise ValueError("no degree-0 component")
    total = 0
    for e in range(1, d + 1):
        if d % e:
            continue
        total += _moebius(e) * k ** (d // e)
    assert total % d == 0
    return total // d


@lru_cache(maxsize=None)
def _moebius(n):
    if n == 1:
        return 1
    result, m, p = 1, n, 2
    while p * p <= m:
        if m % p == 0:
            m //= p
            if m % p == 0:
                return 0
            result = -result
        p += 1
    if m > 1:
        result = -result
    return result


def lyndon_words_up_to(k, maxlen):
    """All Lyndon words over the ordered alphabet {0..k-1}, length <= maxlen.

    Duval's algorithm; yields tuples in lexicographic order.
    """
    w = [-1]
    while w:
        w[-1] += 1
        yield tuple(w)
        m = len(w)
        while len(w) < maxlen:
            w.append(w[len(w) - m])
        while w and w[-1] == k - 1:
            w.pop()


def is_lyndon(word):
    return len(word) > 0 and all(word < word[i:] for i in range(1, len(word)))


def standard_factorization(word):
    """Split a Lyndon word w = uv with v its smallest proper suffix."""
    if len(word) < 2:
        raise ValueError("letters have no factorization")
    v = min(word[i:] for i in range(1, len(word)))
    return word[: len(word) - len(v)], v


def tensor_mul(p, q):
    out = {}
    for wp, cp in p.items():
        for wq, cq in q.items():
            w = wp + wq
            c = out.get(w, 0) + cp * cq
            if c:
                out[w] = c
            elif w in out:
                del out[w]
    return out


def tensor_add(p, q, scale=1):
    out = dict(p)
    for w, c in q.items():
        cc = out.get(w, 0) + scale * c
        if cc:
            out[w] = cc
        elif w in out:
            del out[w]
    return out


def tensor_commutator(p, q):
    return tensor_add(tensor_mul(p, q), tensor_mul(q, p), -1)


class FreeLie:
    """Free Lie algebra on a fixed ordered alphabet of GeneratorSymbols.

    Lie elements are dicts mapping Lyndon words (tuples of letter indices)
    to nonzero Fractions.  Words index the standard Lyndon bracketing.
    """

    def __init__(self, symbols):
        symbols = tuple(sorted(symbols))
        if len(set(symbols)) != len(symbols):
            raise ValueError("duplicate generators")
        if not symbols:
            raise ValueError("alphabet must be nonempty")
        self.symbols = symbols
        self.index = {s: i for i, s in enumerate(symbols)}
        self.bidegrees = tuple(s.bidegree for s in symbols)
        self._expand_cache = {}
        self._lyndon_cache = {}

    def word_bidegree(self, word):
        p = sum(self.bidegrees[l][0] for l in word)
        q = sum(self.bidegrees[l][1] for l in word)
        return (p, q)

    def gen(self, symbol):
        return {(self.index[symbol],): Fraction(1)}

    def lyndon_words_of_length(self, length):
        if length < 1:
            raise ValueError("no degree-0 component")
        key = length
        if key not in self._lyndon_cache:
            words = [w for w in lyndon_words_up_to(len(self.symbols), length)
                     if len(w) == length]
            self._lyndon_cache[key] = words
        return self._lyndon_cache[key]

    def lyndon_basis(self, degree):
        """Lyndon words of the given degree, treating every letter as degree 1."""
        return list(self.lyndon_words_of_length(degree))

    def bidegree_slice(self, p, q):
        """Lyndon words of bidegree exactly (p, q), in lexicographic order.

        Words of several lengths can share a bidegree once t-letters (bidegree
        (1,1)) are present.
        """
        words = []
        for length in range(max(p, q, 1), p + q + 1):
            for w in self.lyndon_words_of_length(length):
                if self.word_bidegree(w) == (p, q):
                    words.append(w)
        return sorted(words, key=lambda w: (len(w), w))

    def expand(self, word):
        """Tensor-algebra expansion of the standard bracketing of a Lyndon word."""
        cached = self._expand_cache.get(word)
        if cached is not None:
            return cached
        if len(word) == 1:
            out = {word: Fraction(1)}
        else:
            u, v = standard_factorization(word)
            out = tensor_commutator(self.expand(u), self.expand(v))
        self._expand_cache[word] = out
        return out

    def element_to_tensor(self, elem):
        out = {}
        for word, coeff in elem.items():
            out = tensor_add(out, self.expand(word), coeff)
        return out

    def coords_from_tensor(self, tensor):
        """Lyndon coordinates of a tensor polynomial lying in the Lie subspace.

        Peels the lexicographically smallest word of each length stratum;
        raises if the input is not a Lie element.
        """
        coords = {}
        by_len = {}
        for w, c in tensor.items():
            by_len.setdefault(len(w), {})[w] = c
        for length in sorted(by_len):
            rest = by_len[length]
            while rest:
                w = min(rest)
                if not is_lyndon(w):
                    raise ValueError("not a Lie element: leading word %r is not Lyndon" % (w,))
                c = rest[w]
                coords[w] = coords.get(w, 0) + c
                for ww, cc in self.expand(w).items():
                    new = rest.get(ww, 0) - c * cc
                    if new:
                        rest[ww] = new
                    elif ww in rest:
                        del rest[ww]
        return {w: c for w, c in coords.items() if c}

    def bracket(self, e1, e2):
        """Normal form of [e1, e2], exact, via the tensor algebra."""
        if not e1 or not e2:
            return {}
        t = tensor_commutator(self.element_to_tensor(e1), self.element_to_tensor(e2))
        return self.coords_from_tensor(t)

    def ad(self, symbol, elem):
        return self.bracket(self.gen(symbol), elem)

    def bidegree_components(self, elem):
        comps = {}
        for w, c in elem.items():
            comps.setdefault(self.word_bidegree(w), {})[w] = c
        return comps

    def monomial_str(self, word):
        if len(word) == 1:
            return str(self.symbols[word[0]])
        u, v = standard_factorization(word)
        return "[%s,%s]" % (self.monomial_str(u), self.monomial_str(v))

    def element_str(self, elem):
        if not elem:
            return "0"
        parts = []
        for w in sorted(elem, key=lambda w: (len(w), w)):
            parts.append("%s*%s" % (elem[w], self.monomial_str(w)))
        return " + ".join(parts)


def lie_add(e1, e2, scale=1):
    return tensor_add(e1, e2, scale)


def lie_scale(e, c):
    return {w: c * v for w, v in e.items()} if c else {}

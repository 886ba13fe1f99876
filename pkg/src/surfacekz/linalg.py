"""Exact sparse linear algebra over the rationals.

Everything downstream (quotient construction, rank certificates, kernel
computations) runs through the incremental reduced row echelon form kept
here.  Rows are sparse integer dicts with content stripped; no floating
point is involved anywhere.
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd


def _strip(row):
    """Divide a nonzero integer row by the gcd of its entries, pivot positive."""
    g = 0
    for v in row.values():
        g = gcd(g, v)
        if g == 1:
            break
    lead = row[min(row)]
    if g > 1:
        row = {c: v // g for c, v in row.items()}
        lead //= g
    if lead < 0:
        row = {c: -v for c, v in row.items()}
    return row


class IntEchelon:
    """Incrementally maintained RREF of an integer row span.

    Pivot columns are chosen greedily at the smallest available column, so
    the final pivot set (and hence the induced basis of free columns) is the
    canonical one of the span, independent of insertion order.
    """

    def __init__(self):
        self.rows = {}        # pivot col -> integer row (dict col -> int)
        self._touch = {}      # col -> set of pivot cols whose row hits it

    @property
    def rank(self):
        return len(self.rows)

    def pivot_columns(self):
        return sorted(self.rows)

    def _forward(self, vec, denom=1):
        """Eliminate all pivot columns from vec; returns (vec, denom)."""
        for c in sorted(vec):
            row = self.rows.get(c)
            if row is None:
                continue
            coef = vec.get(c)
            if not coef:
                continue
            p = row[c]
            for cc, vv in row.items():
                nv = p * vec.get(cc, 0) - coef * vv
                if nv:
                    vec[cc] = nv
                elif cc in vec:
                    del vec[cc]
            for cc in list(vec):
                if cc not in row:
                    vec[cc] *= p
            denom *= p
            g = 0
            for v in vec.values():
                g = gcd(g, v)
                if g == 1:
                    break
            if g > 1:
                vec = {cc: v // g for cc, v in vec.items()}
                if denom % g == 0:
                    denom //= g
                else:
                    # keep denominator exact via Fraction bookkeeping
                    denom = Fraction(denom, g)
        return vec, denom

    def reduce(self, vec):
        """Canonical residual of vec modulo the span, as col -> Fraction."""
        ivec, denom = _to_int_row(vec)
        ivec, denom = self._forward(dict(ivec), denom)
        return {c: Fraction(v, 1) / denom for c, v in ivec.items()}

    def contains(self, vec):
        ivec, _ = _to_int_row(vec)
        ivec, _ = self._forward(dict(ivec), 1)
        return not ivec

    def insert(self, vec):
        """Add a row to the span.  Returns the new pivot column or None."""
        ivec, _ = _to_int_row(vec)
        ivec, _ = self._forward(dict(ivec), 1)
        if not ivec:
            return None
        ivec = _strip(ivec)
        piv = min(ivec)
        self.rows[piv] = ivec
        for c in ivec:
            self._touch.setdefault(c, set()).add(piv)
        # back-substitute into earlier rows so the form stays fully reduced
        for other in list(self._touch.get(piv, ())):
            if other == piv:
                continue
            row = self.rows[other]
            coef = row.get(piv)
            if not coef:
                continue
            p = ivec[piv]
            new = {}
            for cc, vv in row.items():
                nv = p * vv - coef * ivec.get(cc, 0)
                if nv:
                    new[cc] = nv
            for cc, vv in ivec.items():
                if cc not in row:
                    nv = -coef * vv
                    if nv:
                        new[cc] = nv
            new = _strip(new)
            for cc in row:
                if cc not in new:
                    s = self._touch.get(cc)
                    if s:
                        s.discard(other)
            self.rows[other] = new
            for cc in new:
                self._touch.setdefault(cc, set()).add(other)
        return piv

    def free_columns(self, all_columns):
        return [c for c in all_columns if c not in self.rows]


def _to_int_row(vec):
    """Clear denominators of a sparse rational row; returns (int row, denom)."""
    denom = 1
    for v in vec.values():
        if isinstance(v, Fraction):
            denom = denom * v.denominator // gcd(denom, v.denominator)
    if denom == 1:
        return {c: int(v) for c, v in vec.items() if v}, 1
    return {c: int(v * denom) for c, v in vec.items() if v}, denom


def rank_of(rows):
    ech = IntEchelon()
    for r in rows:
        ech.insert(r)
    return ech.rank


def nullspace(rows, ncols):
    """Exact kernel basis of the linear map given by constraint rows.

    Each row is a sparse dict col -> coefficient; the kernel consists of the
    vectors x (length ncols) with row . x = 0 for every row.  Returns a list
    of Fraction-valued dense vectors.
    """
    ech = IntEchelon()
    for r in rows:
        ech.insert(r)
    pivots = ech.pivot_columns()
    free = [c for c in range(ncols) if c not in ech.rows]
    basis = []
    for f in free:
        x = [Fraction(0)] * ncols
        x[f] = Fraction(1)
        for p in pivots:
            row = ech.rows[p]
            v = row.get(f)
            if v:
                x[p] = -Fraction(v, row[p])
        basis.append(x)
    return basis

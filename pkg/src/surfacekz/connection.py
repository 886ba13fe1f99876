"""The connection forms alpha_i with values in truncated t_{g,n}.

alpha_i = sum over strings (a_1..a_s, b) of omega_{a_1..a_s b}(z_i, w)
          [x_{a_1}^i, [..., [x_{a_s}^i, y_b^i]]]
        + sum over j != i and strings (a_1..a_s) of psi3_{a_1..a_s}(z_i, w, z_j)
          [x_{a_1}^i, [..., [x_{a_s}^i, t_ij]]],

with every bracket reduced to canonical quotient coordinates.  Values are
dicts mapping quotient basis monomials (all of q-degree 1) to complex
coefficients of dz_i.  The auxiliary point w drops out of the total up to
the surface relation; that cancellation is itself one of the checks.
"""

from __future__ import annotations

import itertools
import math
from fractions import Fraction

import numpy as np

from .lie import t_, x_, y_
from .schottky import (OmegaFamily, PsiSeries, a_cycle_integral, circle_nodes,
                       default_group, mobius_apply, mobius_derivative)
from .tgn import GradedQuotient, SimplicialMap


class ConnectionContext:
    """Curve data, algebra quotient and form families for one instance."""

    def __init__(self, g, n, pmax=2, qmax=2, L=None, w=0.25 - 0.35j, group=None,
                 quotient=None):
        self.g = g
        self.n = n
        self.pmax = pmax
        self.qmax = qmax
        self.group = group if group is not None else default_group(g)
        self.L = L if L is not None else (8 if g == 1 else 6)
        self.w = complex(w)
        self.quotient = quotient if quotient is not None else \
            GradedQuotient(g, n, pmax, qmax)
        self.omega = OmegaFamily(self.group, self.L, pmax + 1, self.w)
        self.psi = PsiSeries(self.group, self.L, max(pmax - 1, 0))
        self._brackets = {}
        for i in range(1, n + 1):
            self._prepare_brackets(i)

    def _prepare_brackets(self, i):
        """Reduced ad-chains [x_{a_1}^i, [.., [x_{a_s}^i, gen]]] per string."""
        fl = self.quotient.lie
        out_y = {}
        for s in range(self.pmax + 1):
            for word in itertools.product(range(1, self.g + 1), repeat=s):
                for b in range(1, self.g + 1):
                    elem = fl.gen(y_(b, i))
                    for a in reversed(word):
                        elem = fl.bracket(fl.gen(x_(a, i)), elem)
                    red = self.quotient.reduce(elem)
                    if red:
                        out_y[word + (b,)] = red
        out_t = {}
        for j in range(1, self.n + 1):
            if j == i:
                continue
            for s in range(self.pmax):
                for word in itertools.product(range(1, self.g + 1), repeat=s):
                    elem = fl.gen(t_(i, j))
                    for a in reversed(word):
                        elem = fl.bracket(fl.gen(x_(a, i)), elem)
                    red = self.quotient.reduce(elem)
                    if red:
                        out_t[(j, word)] = red
        self._brackets[i] = (out_y, out_t)

    # -- evaluation -------------------------------------------------------

    def alpha(self, points, i, w=None, translate=None):
        """Coefficients of alpha_i at the configuration as {monomial: value}.

        `translate`, if given, is a Mobius matrix applied to the i-th
        variable (the dz_i Jacobian factor is included).
        """
        zi = complex(points[i - 1])
        jac = 1.0
        if translate is not None:
            zi_new = mobius_apply(translate, zi)
            jac = mobius_derivative(translate, zi)
            zi = zi_new
        w = self.w if w is None else w
        omega = self.omega if w == self.w else OmegaFamily(
            self.group, self.L, self.pmax + 1, w)
        out_y, out_t = self._brackets[i]
        val = {}
        zarr = np.asarray([zi])
        ovals = omega.eval_all(zarr)
        for string, red in out_y.items():
            coeff = ovals[string][0] * jac
            _accumulate(val, red, coeff)
        tails = omega.fit_residual
        for j in range(1, self.n + 1):
            if j == i:
                continue
            p3, tail = self.psi.psi3(zarr, w, complex(points[j - 1]))
            tails = max(tails, tail)
            for (jj, word), red in out_t.items():
                if jj != j:
                    continue
                coeff = p3[word][0] * jac
                _accumulate(val, red, coeff)
        return val, tails

    def alpha_budget(self, tails):
        return tails + 1e-10

    def exp_ad(self, a, j, value):
        """e^{ad x_a^j} applied to a coefficient dict, truncated to the box."""
        fl = self.quotient.lie
        gen = fl.gen(x_(a, j))
        out = {m: complex(c) for m, c in value.items()}
        current = dict(out)
        fact = 1
        for k in range(1, self.pmax + 1):
            fact *= k
            nxt = {}
            for mono, c in current.items():
                p, q = fl.word_bidegree(mono)
                if p + 1 > self.pmax:
                    continue
                br = self.quotient.bracket_reduced(gen, {mono: Fraction(1)})
                for m2, c2 in br.items():
                    nxt[m2] = nxt.get(m2, 0.0) + c * complex(c2)
            current = nxt
            if not current:
                break
            for m, c in current.items():
                out[m] = out.get(m, 0.0) + c / fact
        return {m: c for m, c in out.items() if abs(c) > 0}

    def bracket_values(self, v1, v2):
        """Pointwise bracket of two coefficient dicts, reduced, within bounds."""
        out = {}
        dropped = 0
        for m1, c1 in v1.items():
            bd1 = self.quotient.lie.word_bidegree(m1)
            for m2, c2 in v2.items():
                bd2 = self.quotient.lie.word_bidegree(m2)
                p, q = bd1[0] + bd2[0], bd1[1] + bd2[1]
                if p > self.pmax or q > self.qmax:
                    dropped += 1
                    continue
                br = self.quotient.bracket_basis(m1, m2)
                for m, c in br.items():
                    out[m] = out.get(m, 0.0) + c1 * c2 * complex(c)
        return out, dropped


def _accumulate(val, red, coeff):
    if not coeff:
        return
    for m, c in red.items():
        val[m] = val.get(m, 0.0) + coeff * complex(c)


def _max_coeff(value):
    return max((abs(c) for c in value.values()), default=0.0)


def _diff_max(v1, v2):
    keys = set(v1) | set(v2)
    return max((abs(v1.get(k, 0.0) - v2.get(k, 0.0)) for k in keys), default=0.0)


def _report(name, residual, budget, safety=10.0, **extra):
    budget = max(budget, 1e-11)
    rep = {"check": name, "residual": float(residual), "budget": float(budget),
           "safety": safety, "ok": bool(residual < budget * safety)}
    rep.update(extra)
    return rep


def default_points(ctx, seed=0, spread=0.35):
    """A deterministic distinct configuration inside the fundamental domain."""
    rng = np.random.default_rng(seed)
    pts = []
    guard = 0
    while len(pts) < ctx.n:
        guard += 1
        if guard > 20000:
            raise RuntimeError("failed to place configuration points")
        z = complex(rng.uniform(-spread, spread), rng.uniform(-spread, spread))
        if not ctx.group.in_fundamental_domain(z, margin=0.25):
            continue
        if abs(z - ctx.w) < 0.15:
            continue
        if all(abs(z - p) > 0.12 for p in pts):
            pts.append(z)
    return pts


def check_leading_term(ctx, points, i):
    """The (0,1) part of alpha_i is sum_a omega_a(z_i) y_a^i."""
    val, tails = ctx.alpha(points, i)
    holo = ctx.omega.holo.eval(np.asarray([complex(points[i - 1])]))
    worst = 0.0
    fl = ctx.quotient.lie
    for a in range(1, ctx.g + 1):
        mono = (fl.index[y_(a, i)],)
        got = val.get(mono, 0.0)
        worst = max(worst, abs(got - holo[a - 1][0]))
    return _report("alpha_leading_term", worst, ctx.alpha_budget(tails))


def check_w_independence(ctx, points, i, w2=-0.3 - 0.4j):
    v1, t1 = ctx.alpha(points, i)
    v2, t2 = ctx.alpha(points, i, w=w2)
    return _report("alpha_w_independence", _diff_max(v1, v2),
                   ctx.alpha_budget(max(t1, t2)))


def check_automorphy(ctx, points, i, j, a):
    """gamma_a^{z_j}(alpha_i) = e^{ad x_a^j}(alpha_i).

    For j = i the identity is tested at a point near the a-th circle, where
    the deck image stays inside the region in which the fitted rational
    representation of the omega family is trusted; by analyticity this
    checks the identity everywhere.
    """
    minv = ctx.group.inv_mats[a - 1]
    points = list(points)
    if j == i:
        c, r = ctx.group.a_circle(a, scale=1.09)
        points[i - 1] = c + r * np.exp(0.43j)
        moved, t1 = ctx.alpha(points, i, translate=minv)
    else:
        pts = list(points)
        pts[j - 1] = mobius_apply(minv, complex(points[j - 1]))
        moved, t1 = ctx.alpha(pts, i)
    base, t2 = ctx.alpha(points, i)
    rhs = ctx.exp_ad(a, j, base)
    return _report("alpha_automorphy", _diff_max(moved, rhs),
                   ctx.alpha_budget(max(t1, t2)), i=i, j=j, a=a)


def check_residue(ctx, points, i, j, nodes=48, radius=5e-3):
    """Contour residue of alpha_i at z_i = z_j equals the class of t_ij."""
    zj = complex(points[j - 1])
    zc, dz = circle_nodes(zj, radius, nodes)
    acc = {}
    tails = 0.0
    for node, weight in zip(zc, dz):
        pts = list(points)
        pts[i - 1] = node
        val, t = ctx.alpha(pts, i)
        tails = max(tails, t)
        for m, c in val.items():
            acc[m] = acc.get(m, 0.0) + c * weight / (2j * np.pi)
    want = {m: complex(c) for m, c in
            ctx.quotient.reduce(ctx.quotient.lie.gen(t_(i, j))).items()}
    return _report("alpha_residue", _diff_max(acc, want),
                   ctx.alpha_budget(tails) + 1e-8, i=i, j=j)


def check_alpha_aperiod(ctx, points, i, a, nodes=96, scale=1.1):
    """I_A_a[alpha_i] = (ad x_a^i / (e^{ad x_a^i} - 1)) y_a^i, truncated."""
    from .schottky import bernoulli_b
    c, r = ctx.group.a_circle(a, scale=scale)
    zc, dz = circle_nodes(c, r, nodes)
    acc = {}
    tails = 0.0
    for node, weight in zip(zc, dz):
        pts = list(points)
        pts[i - 1] = node
        val, t = ctx.alpha(pts, i)
        tails = max(tails, t)
        for m, c2 in val.items():
            acc[m] = acc.get(m, 0.0) + c2 * weight
    acc = {m: -c2 / (2j * np.pi) for m, c2 in acc.items()}
    fl = ctx.quotient.lie
    want = {}
    elem = fl.gen(y_(a, i))
    for k in range(0, ctx.pmax + 1):
        if k > 0:
            elem = fl.bracket(fl.gen(x_(a, i)), elem)
        red = ctx.quotient.reduce(elem)
        bk = float(bernoulli_b(k))
        for m, c2 in red.items():
            want[m] = want.get(m, 0.0) + bk * complex(c2)
    return _report("alpha_aperiod", _diff_max(acc, want),
                   ctx.alpha_budget(tails) + 1e-8, i=i, a=a)


def check_closedness(ctx, points, i, j, h=1e-4):
    """d_{z_j} alpha_i = d_{z_i} alpha_j via Richardson central differences."""
    if i == j:
        return _report("alpha_closedness", 0.0, 0.0, i=i, j=j, trivial=True)

    def deriv(k, l, step):
        pts_p = list(points)
        pts_m = list(points)
        pts_p[l - 1] = complex(points[l - 1]) + step
        pts_m[l - 1] = complex(points[l - 1]) - step
        vp, t1 = ctx.alpha(pts_p, k)
        vm, t2 = ctx.alpha(pts_m, k)
        keys = set(vp) | set(vm)
        return {m: (vp.get(m, 0.0) - vm.get(m, 0.0)) / (2 * step) for m in keys}, \
            max(t1, t2)

    def richardson(k, l):
        d1, t1 = deriv(k, l, h)
        d2, t2 = deriv(k, l, h / 2)
        keys = set(d1) | set(d2)
        return {m: (4 * d2.get(m, 0.0) - d1.get(m, 0.0)) / 3 for m in keys}, \
            max(t1, t2)

    dji, t1 = richardson(i, j)
    dij, t2 = richardson(j, i)
    budget = ctx.alpha_budget(max(t1, t2)) / h + h ** 3
    return _report("alpha_closedness", _diff_max(dji, dij), budget, i=i, j=j)


def check_commutation(ctx, points, i, j):
    """[alpha_i, alpha_j] = 0 in the truncated quotient."""
    vi, t1 = ctx.alpha(points, i)
    vj, t2 = ctx.alpha(points, j)
    br, dropped = ctx.bracket_values(vi, vj)
    scale = max(_max_coeff(vi), _max_coeff(vj), 1.0)
    budget = ctx.alpha_budget(max(t1, t2)) * scale
    return _report("alpha_commutation", _max_coeff(br), budget,
                   i=i, j=j, dropped_terms=dropped)


def check_commutation_near_diagonal(ctx, points, i, j, eps_seq=(1e-1, 5e-2, 2.5e-2)):
    """Residual stays bounded as z_i -> z_j (no pole at the diagonal)."""
    residuals = []
    for eps in eps_seq:
        pts = list(points)
        pts[i - 1] = complex(points[j - 1]) + eps * (0.6 + 0.8j)
        rep = check_commutation(ctx, pts, i, j)
        residuals.append(rep["residual"])
    bounded = residuals[-1] < 10 * max(residuals[0], 1e-9)
    return {"check": "alpha_commutation_near_diagonal", "i": i, "j": j,
            "residuals": residuals, "ok": bool(bounded)}


# -- the simplicial comparison -------------------------------------------------

class SimplicialComparison:
    """Both sides of the degeneration identity for alpha_1 with n-1 points."""

    def __init__(self, ctx_n, ctx_small):
        if ctx_n.n != ctx_small.n + 1:
            raise ValueError("need contexts with n and n-1 points")
        self.ctx = ctx_n
        self.small = ctx_small
        self.smap = SimplicialMap(ctx_n.quotient)
        self._images = {}

    def _image_class(self, mono):
        if mono not in self._images:
            img = self.smap.image({mono: Fraction(1)})
            self._images[mono] = self.smap.reduce_mod_line(img)
        return self._images[mono]

    def lhs(self, zpts):
        """(alpha_1^{(n-1)})^{12,3..n} at (z, z_3', ..), mod C t_12."""
        val, tails = self.small.alpha(zpts, 1)
        out = {}
        for m, c in val.items():
            for m2, c2 in self._image_class(m).items():
                out[m2] = out.get(m2, 0.0) + c * complex(c2)
        return out, tails

    def rhs(self, zpts, eps_seq=(1e-2, 5e-3, 2.5e-3), direction=0.8 + 0.6j,
            fvals=None):
        """[alpha~_omega] at the diagonal limit, mod C t_12.

        fvals: optional callable z -> f(z) twisting the reference
        differential omega to f omega (for the gauge identity).
        """
        z = complex(zpts[0])
        rest = [complex(p) for p in zpts[1:]]
        tails = 0.0
        seq = []
        for eps in eps_seq:
            z2 = z + eps * direction
            pts = [z, z2] + rest
            a1, t1 = self.ctx.alpha(pts, 1)
            a2, t2 = self.ctx.alpha(pts, 2)
            tails = max(tails, t1, t2)
            w1 = self.ctx.omega.holo.eval(np.asarray([z]))[0][0]
            w2 = self.ctx.omega.holo.eval(np.asarray([z2]))[0][0]
            if fvals is not None:
                w1 = w1 * fvals(z)
                w2 = w2 * fvals(z2)
            combo = {}
            for m, c in a2.items():
                combo[m] = combo.get(m, 0.0) + c
            for m, c in a1.items():
                combo[m] = combo.get(m, 0.0) + (w2 / w1) * c
            seq.append(combo)
        out = _extrapolate(seq, eps_seq)
        red = {}
        for m, c in out.items():
            for m2, c2 in self.smap.reduce_mod_line({m: Fraction(1)}).items():
                red[m2] = red.get(m2, 0.0) + c * complex(c2)
        return red, tails

    def t12_coefficient(self, zpts, eps_seq=(1e-2, 5e-3, 2.5e-3),
                        direction=0.8 + 0.6j, fvals=None):
        """The full (not mod-line) alpha~ value paired against t_12."""
        z = complex(zpts[0])
        rest = [complex(p) for p in zpts[1:]]
        seq = []
        for eps in eps_seq:
            z2 = z + eps * direction
            pts = [z, z2] + rest
            a1, _ = self.ctx.alpha(pts, 1)
            a2, _ = self.ctx.alpha(pts, 2)
            w1 = self.ctx.omega.holo.eval(np.asarray([z]))[0][0]
            w2 = self.ctx.omega.holo.eval(np.asarray([z2]))[0][0]
            if fvals is not None:
                w1 = w1 * fvals(z)
                w2 = w2 * fvals(z2)
            combo = {}
            for m, c in a2.items():
                combo[m] = combo.get(m, 0.0) + c
            for m, c in a1.items():
                combo[m] = combo.get(m, 0.0) + (w2 / w1) * c
            seq.append(combo)
        return _extrapolate(seq, eps_seq)


def _extrapolate(values, eps_seq):
    """Neville extrapolation of coefficient dicts to eps -> 0."""
    keys = set()
    for v in values:
        keys.update(v)
    out = {}
    for m in keys:
        ys = [v.get(m, 0.0) for v in values]
        xs = list(eps_seq)
        for level in range(1, len(xs)):
            for k in range(len(xs) - level):
                ys[k] = ys[k + 1] + (ys[k + 1] - ys[k]) * xs[k + level] / \
                    (xs[k] - xs[k + level])
        out[m] = ys[0]
    return out


def check_simplicial(ctx_n, ctx_small, zpts, seed=0):
    comp = SimplicialComparison(ctx_n, ctx_small)
    lhs, t1 = comp.lhs(zpts)
    rhs, t2 = comp.rhs(zpts)
    budget = ctx_n.alpha_budget(max(t1, t2)) + 1e-6  # extrapolation error
    return _report("simplicial_identity", _diff_max(lhs, rhs), budget)


def check_gauge_identity(ctx_n, ctx_small, zpts, p0=1.9 + 1.3j):
    """alpha~_{f omega} - alpha~_omega = -(d log f)(z_1) t_12."""
    comp = SimplicialComparison(ctx_n, ctx_small)
    f = lambda z: z - p0
    base = comp.t12_coefficient(zpts)
    twisted = comp.t12_coefficient(zpts, fvals=f)
    z = complex(zpts[0])
    dlogf = 1.0 / (z - p0)
    want = {m: -dlogf * complex(c) for m, c in
            ctx_n.quotient.reduce(ctx_n.quotient.lie.gen(t_(1, 2))).items()}
    diff = {m: twisted.get(m, 0.0) - base.get(m, 0.0)
            for m in set(twisted) | set(base)}
    return _report("simplicial_gauge", _diff_max(diff, want), 1e-5)

"""Parallel transport of the connection and braid-group monodromy.

Group elements live in the degree-truncated enveloping algebra of the
quotient, with an S_n permutation part.  Transport solves dT = T alpha(t)
panelwise by a second-order Magnus step (exact in a degree-2 truncation up
to quadrature); braid generators are concrete loops:

  * X_a^i: strand i approaches circle(+a) and walks once around it (ccw);
  * Y_a^i: strand i runs to the a-th cut, crosses it (a deck jump that
    contributes the rho_0 factor exp(x_a^i)) and returns;
  * sigma_i: strands i, i+1 exchange by clockwise half-turns.

Transport uses the classical normalization alpha / (-2 pi i), under which
the leading expansions are rho(X_a^i) = e^{y_a^i + ...} and
rho(Y_a^i) = e^{x_a^i + sum_b tau_ab y_b^i + ...} with tau the reported
period matrix, and log rho(sigma_i^2) equals the independent contour
integral of the connection around the exchanged pair (minus the t-class
for the counterclockwise double twist).
"""

from __future__ import annotations

from fractions import Fraction

import numpy as np

from .lie import t_, x_, y_
from .schottky import mobius_apply
from .tgn import GradedQuotient

TRANSPORT_SCALE = -1.0 / (2j * np.pi)


class Envelope:
    """PBW basis of U(t_{g,n}) truncated at total degree N."""

    def __init__(self, quotient, N):
        self.quotient = quotient
        self.N = N
        basis = []
        for (p, q), sl in sorted(quotient.slices.items(),
                                 key=lambda kv: (kv[0][0] + kv[0][1], kv[0])):
            if p + q > N:
                continue
            for m in sl.basis:
                basis.append((m, p + q))
        self.lie_basis = basis
        self.lie_index = {m: k for k, (m, _) in enumerate(basis)}
        self.lie_degree = [d for (_, d) in basis]
        self._bracket_cache = {}
        self._insert_cache = {}

    def lie_coords(self, value):
        """Map a {monomial: coeff} dict to {lie index: coeff}."""
        out = {}
        for m, c in value.items():
            k = self.lie_index.get(m)
            if k is None:
                continue  # beyond the truncation degree
            out[k] = out.get(k, 0.0) + c
        return out

    def bracket_indices(self, k1, k2):
        key = (k1, k2)
        cached = self._bracket_cache.get(key)
        if cached is None:
            m1 = self.lie_basis[k1][0]
            m2 = self.lie_basis[k2][0]
            if self.lie_degree[k1] + self.lie_degree[k2] > self.N:
                cached = {}
            else:
                red = self.quotient.bracket_basis(m1, m2)
                cached = {}
                for m, c in red.items():
                    idx = self.lie_index.get(m)
                    if idx is not None:
                        cached[idx] = Fraction(c)
            self._bracket_cache[key] = cached
        return cached

    def lie_bracket(self, u, v):
        out = {}
        for k1, c1 in u.items():
            for k2, c2 in v.items():
                for k, c in self.bracket_indices(k1, k2).items():
                    val = out.get(k, 0.0) + c1 * c2 * complex(c)
                    out[k] = val
        return {k: c for k, c in out.items() if c}

    # -- PBW products ------------------------------------------------------

    def _insert(self, word, j):
        """Product (PBW word) * e_j as a PBW combination."""
        key = (word, j)
        cached = self._insert_cache.get(key)
        if cached is not None:
            return cached
        if sum(self.lie_degree[k] for k in word) + self.lie_degree[j] > self.N:
            out = {}
        elif not word or word[-1] <= j:
            out = {word + (j,): Fraction(1)}
        else:
            head, k = word[:-1], word[-1]
            out = {}
            for w2, c2 in self._insert(head, j).items():
                for w3, c3 in self._insert(w2, k).items():
                    out[w3] = out.get(w3, Fraction(0)) + c2 * c3
            for l, cl in self.bracket_indices(k, j).items():
                for w3, c3 in self._insert(head, l).items():
                    out[w3] = out.get(w3, Fraction(0)) + cl * c3
            out = {w: c for w, c in out.items() if c}
        self._insert_cache[key] = out
        return out

    def mult_words(self, w1, w2):
        acc = {w1: Fraction(1)}
        for j in w2:
            nxt = {}
            for w, c in acc.items():
                for w3, c3 in self._insert(w, j).items():
                    nxt[w3] = nxt.get(w3, Fraction(0)) + c * c3
            acc = nxt
        return acc

    def mult(self, e1, e2):
        out = {}
        for w1, c1 in e1.items():
            for w2, c2 in e2.items():
                for w, c in self.mult_words(w1, w2).items():
                    val = out.get(w, 0.0) + c1 * c2 * complex(c)
                    out[w] = val
        return {w: c for w, c in out.items() if c}

    def unit(self):
        return {(): 1.0 + 0.0j}

    def from_lie(self, lie_coords):
        return {(k,): complex(c) for k, c in lie_coords.items()}

    def exp(self, lie_or_env):
        u = dict(lie_or_env)
        u.pop((), None)
        out = self.unit()
        power = self.unit()
        fact = 1
        for k in range(1, self.N + 1):
            fact *= k
            power = self.mult(power, u)
            if not power:
                break
            for w, c in power.items():
                out[w] = out.get(w, 0.0) + c / fact
        return out

    def log(self, elem):
        u = dict(elem)
        unit = u.pop((), 0.0)
        if abs(unit - 1.0) > 1e-8:
            raise ValueError("log requires unit leading term, got %r" % unit)
        out = {}
        power = self.unit()
        for k in range(1, self.N + 1):
            power = self.mult(power, u)
            if not power:
                break
            sign = (-1.0) ** (k + 1) / k
            for w, c in power.items():
                out[w] = out.get(w, 0.0) + sign * c
        return out

    def grouplike_defect(self, elem):
        """Largest log-coefficient on PBW words of length >= 2."""
        lg = self.log(elem)
        return max((abs(c) for w, c in lg.items() if len(w) >= 2), default=0.0)

    def coeff_by_degree(self, elem):
        out = {}
        for w, c in elem.items():
            d = sum(self.lie_degree[k] for k in w)
            out.setdefault(d, {})[w] = c
        return out

    def max_abs(self, elem):
        return max((abs(c) for c in elem.values()), default=0.0)

    def invert(self, elem):
        """Inverse of 1 + u in the truncated algebra."""
        u = dict(elem)
        unit = u.pop((), 0.0)
        if abs(unit - 1.0) > 1e-8:
            raise ValueError("invert requires unit leading term")
        out = self.unit()
        power = self.unit()
        for k in range(1, self.N + 1):
            power = self.mult(power, u)
            if not power:
                break
            for w, c in power.items():
                out[w] = out.get(w, 0.0) + (-1.0) ** k * c
        return out

    def diff_norm(self, e1, e2):
        keys = set(e1) | set(e2)
        return max((abs(e1.get(k, 0.0) - e2.get(k, 0.0)) for k in keys), default=0.0)


class PermutationAction:
    """The S_n action on the truncated envelope by relabeling the points."""

    def __init__(self, env):
        self.env = env
        self.quotient = env.quotient
        self._mono_cache = {}

    def act_lie_index(self, sigma, k):
        """sigma . e_k as lie coords; sigma maps point i to sigma[i-1]."""
        key = (sigma, k)
        cached = self._mono_cache.get(key)
        if cached is None:
            fl = self.quotient.lie
            mono = self.env.lie_basis[k][0]
            lm = {}
            for s in fl.symbols:
                if s.kind == "t":
                    tgt = t_(sigma[s.i - 1], sigma[s.a - 1])
                else:
                    tgt = x_(s.a, sigma[s.i - 1]) if s.kind == "x" else \
                        y_(s.a, sigma[s.i - 1])
                lm[s] = fl.gen(tgt)
            from .tgn import _map_monomial
            img = self.quotient.reduce(_map_monomial(fl, mono, lm, fl))
            cached = self.env.lie_coords(img)
            self._mono_cache[key] = cached
        return cached

    def act(self, sigma, elem):
        if sigma == tuple(range(1, self.quotient.n + 1)):
            return dict(elem)
        env = self.env
        out = {}
        for w, c in elem.items():
            term = {(): c}
            for k in w:
                factor = env.from_lie(self.act_lie_index(sigma, k))
                term = env.mult(term, factor)
            for w2, c2 in term.items():
                out[w2] = out.get(w2, 0.0) + c2
        return out


class GroupElement:
    """An element of exp(t-hat) x| S_n, truncated."""

    def __init__(self, env, series, perm):
        self.env = env
        self.series = series
        self.perm = tuple(perm)

    @classmethod
    def identity(cls, env, n):
        return cls(env, env.unit(), tuple(range(1, n + 1)))

    def mul(self, other, action):
        twisted = action.act(self.perm, other.series)
        series = self.env.mult(self.series, twisted)
        perm = tuple(self.perm[p - 1] for p in other.perm)
        return GroupElement(self.env, series, perm)

    def inverse(self, action):
        inv_perm = [0] * len(self.perm)
        for i, p in enumerate(self.perm, start=1):
            inv_perm[p - 1] = i
        inv_perm = tuple(inv_perm)
        inv_series = action.act(inv_perm, self.env.invert(self.series))
        return GroupElement(self.env, inv_series, inv_perm)


# -- paths and transport ---------------------------------------------------

class Segment:
    """Linear or circular motion of a subset of strands over [0, 1]."""

    def __init__(self, moves):
        # moves: {strand index: ("line", z0, z1) | ("arc", center, r, th0, th1)}
        self.moves = moves

    def positions(self, base, t):
        pts = list(base)
        for k, mv in self.moves.items():
            pts[k - 1] = _move_at(mv, t)
        return pts

    def velocity(self, k, t):
        mv = self.moves[k]
        if mv[0] == "line":
            return mv[2] - mv[1]
        _, c, r, th0, th1 = mv
        return r * 1j * (th1 - th0) * np.exp(1j * (th0 + t * (th1 - th0)))

    def endpoint(self, base):
        return self.positions(base, 1.0)

    def reversed(self):
        out = {}
        for k, mv in self.moves.items():
            if mv[0] == "line":
                out[k] = ("line", mv[2], mv[1])
            else:
                _, c, r, th0, th1 = mv
                out[k] = ("arc", c, r, th1, th0)
        return Segment(out)


def _move_at(mv, t):
    if mv[0] == "line":
        return mv[1] + (mv[2] - mv[1]) * t
    _, c, r, th0, th1 = mv
    return c + r * np.exp(1j * (th0 + t * (th1 - th0)))


class Jump:
    """Deck identification of one strand: position w -> gamma_a^{e} applied,
    contributing the rho_0 factor exp(e x_a^strand)."""

    def __init__(self, strand, a, exponent):
        self.strand = strand
        self.a = a
        self.exponent = exponent

    def reversed(self):
        return Jump(self.strand, self.a, -self.exponent)


class Transporter:
    """Degree-graded parallel transport of alpha_KZ along strand paths."""

    def __init__(self, ctx, N, panels=8, nodes=8):
        self.ctx = ctx
        self.env = Envelope(ctx.quotient, N)
        self.action = PermutationAction(self.env)
        self.N = N
        self.panels = panels
        self.nodes = nodes
        self.n = ctx.n
        self._tails = 0.0

    def _alpha_at(self, pts, k):
        val, tail = self.ctx.alpha(pts, k)
        self._tails = max(self._tails, tail)
        coords = self.env.lie_coords(val)
        return {i: TRANSPORT_SCALE * c for i, c in coords.items()}

    def _segment_transport(self, base, seg, panels=None):
        env = self.env
        panels = panels or self.panels
        T = env.unit()
        gl_x, gl_w = np.polynomial.legendre.leggauss(self.nodes)
        for p in range(panels):
            t0, t1 = p / panels, (p + 1) / panels
            ts = 0.5 * (gl_x + 1) * (t1 - t0) + t0
            ws = 0.5 * (t1 - t0) * gl_w
            values = []
            for t in ts:
                pts = seg.positions(base, t)
                total = {}
                for k in seg.moves:
                    a = self._alpha_at(pts, k)
                    v = seg.velocity(k, t)
                    for i, c in a.items():
                        total[i] = total.get(i, 0.0) + c * v
                values.append(total)
            omega1 = {}
            for val, wgt in zip(values, ws):
                for i, c in val.items():
                    omega1[i] = omega1.get(i, 0.0) + wgt * c
            omega2 = {}
            if self.N >= 2:
                for bi, (tb, wb) in enumerate(zip(ts, ws)):
                    for ci, (tc, wc) in enumerate(zip(ts, ws)):
                        if ts[ci] >= ts[bi]:
                            continue
                        br = env.lie_bracket(values[ci], values[bi])
                        for i, c in br.items():
                            omega2[i] = omega2.get(i, 0.0) + 0.5 * wb * wc * c
            omega = dict(omega1)
            for i, c in omega2.items():
                omega[i] = omega.get(i, 0.0) + c
            T = env.mult(T, env.exp(env.from_lie(omega)))
        return T

    def transport_events(self, events, base=None, panels=None):
        """Transport along a list of Segment / Jump events.

        Returns (GroupElement-like series, final base, permutation); the
        permutation is tracked by the caller for swap segments.
        """
        env = self.env
        base = list(base) if base is not None else list(self.base)
        T = env.unit()
        for ev in events:
            if isinstance(ev, Jump):
                # the deck identification z -> gamma_a^{e}(z) carries the
                # rho_0 factor exp(e x_a); this pairing is forced by the
                # automorphy gamma_a alpha = e^{ad x_a} alpha (transport along
                # the gamma_a-image of a path equals e^{-x} T e^{x})
                fl = self.ctx.quotient.lie
                gen = fl.gen(x_(ev.a, ev.strand))
                coords = env.lie_coords(
                    {m: complex(c) for m, c in self.ctx.quotient.reduce(gen).items()})
                factor = env.exp(env.from_lie(
                    {i: ev.exponent * c for i, c in coords.items()}))
                T = env.mult(T, factor)
                base[ev.strand - 1] = mobius_apply(
                    self.ctx.group.gen_mats[ev.a - 1] if ev.exponent > 0
                    else self.ctx.group.inv_mats[ev.a - 1], base[ev.strand - 1])
            else:
                for k in ev.moves:
                    start = _move_at(ev.moves[k], 0.0)
                    if abs(start - base[k - 1]) > 1e-9:
                        raise ValueError(
                            "discontinuous path for strand %d: at %r, segment "
                            "starts at %r" % (k, base[k - 1], start))
                T = env.mult(T, self._segment_transport(base, ev, panels=panels))
                base = ev.endpoint(base)
        return T, base

    @property
    def tails(self):
        return self._tails


class BraidLab:
    """Concrete loop representatives for the braid generators, and relations."""

    def __init__(self, ctx, N=2, panels=8, nodes=8, spread=0.22):
        self.ctx = ctx
        self.transporter = Transporter(ctx, N, panels=panels, nodes=nodes)
        self.env = self.transporter.env
        self.action = self.transporter.action
        n = ctx.n
        self.base = [0.05 + (k - (n + 1) / 2.0) * spread * 1j
                     for k in range(1, n + 1)]
        for p in self.base:
            if not ctx.group.in_fundamental_domain(p, margin=0.3):
                raise ValueError("basepoint configuration leaves the domain")
        self._cache = {}

    # -- generator event lists (on the standard configuration) -----------
    #
    # All handle-bound paths leave the marked-point cluster straight down,
    # run along a staging line below every circle, and climb to the bottom
    # of the target circle.  Exiting below the cluster keeps the loops of
    # strand 1 unlinked from the other strands, which is what the
    # commutation relations (X_a, sigma_i) = 1 for i > 1 require.

    def _stage_y(self):
        low = min(c.imag - 1.25 * r for c, r in self.ctx.group.circles.values())
        low = min(low, min(p.imag for p in self.base) - 0.2, self.ctx.w.imag - 0.2)
        return low - 0.25

    def _route_to(self, z0, target, lateral=0.0):
        """Waypoints z0 -> below cluster -> below target -> target.

        `lateral` shifts the descent column so that strands above others in
        the cluster do not run through them on the way down.
        """
        sy = self._stage_y()
        way = [z0]
        if lateral:
            way.append(z0 + lateral)
        way += [complex(way[-1].real, sy), complex(target.real, sy), target]
        return way

    def x_events(self, a, strand):
        z0 = self.base[strand - 1]
        c, r = self.ctx.group.a_circle(a, scale=1.12)
        bottom = c - 1j * r
        way = self._route_to(z0, bottom, lateral=-0.13 * (strand - 1))
        segs = [Segment({strand: ("line", u, v)})
                for u, v in zip(way[:-1], way[1:])]
        th = -np.pi / 2
        segs.append(Segment({strand: ("arc", c, r, th, th + np.pi)}))
        segs.append(Segment({strand: ("arc", c, r, th + np.pi, th + 2 * np.pi)}))
        segs.extend(Segment({strand: ("line", v, u)})
                    for u, v in zip(way[-2::-1], way[:0:-1]))
        return segs

    def y_events(self, a, strand):
        """Strand crosses the a-th cut through circle(-a): the jump applies
        gamma_a (factor e^{x_a}), landing just inside circle(+a)."""
        z0 = self.base[strand - 1]
        cm, _ = self.ctx.group.circles[-a]
        cp, rp = self.ctx.group.circles[a]
        exit_pt = cp - 1j * rp / 1.12
        jump_pt = mobius_apply(self.ctx.group.inv_mats[a - 1], exit_pt)
        rj = abs(jump_pt - cm)
        bottom = cm - 1j * rj
        th1 = float(np.angle(jump_pt - cm))
        sweep = (th1 + np.pi / 2) % (2 * np.pi)
        if sweep > np.pi:
            sweep -= 2 * np.pi
        way_in = self._route_to(z0, bottom, lateral=-0.13 * (strand - 1))
        segs = [Segment({strand: ("line", u, v)})
                for u, v in zip(way_in[:-1], way_in[1:])]
        if abs(sweep) > 1e-12:
            segs.append(Segment({strand: ("arc", cm, rj, -np.pi / 2,
                                           -np.pi / 2 + sweep)}))
        events = segs + [Jump(strand, a, +1)]
        way_out = self._route_to(z0, exit_pt, lateral=-0.13 * (strand - 1))
        events.extend(Segment({strand: ("line", v, u)})
                      for u, v in zip(way_out[-2::-1], way_out[:0:-1]))
        return events

    def sigma_events(self, i, inverse=False):
        """Half-turn exchange of the strands at positions i, i+1.

        sigma_i turns counterclockwise; this is the handedness under which
        the whole defining relation set of the surface braid group holds
        verbatim for our X and Y loops.  Consequently log rho(sigma_i^2) is
        minus the class of t_{i,i+1} (the clockwise double twist gives +t).
        """
        p = self.base[i - 1]
        q = self.base[i]
        c = 0.5 * (p + q)
        r = 0.5 * abs(q - p)
        thp = float(np.angle(p - c))
        turn = -np.pi if inverse else np.pi
        return [Segment({
            i: ("arc", c, r, thp, thp + turn),
            i + 1: ("arc", c, r, thp + turn, thp + 2 * turn),
        })]

    def generator(self, kind, a_or_i, strand=None, panels=None):
        """Monodromy image of X_a^i, Y_a^i or sigma_i as a GroupElement."""
        key = (kind, a_or_i, strand, panels)
        if key in self._cache:
            return self._cache[key]
        n = self.ctx.n
        if kind == "X":
            events = self.x_events(a_or_i, strand or 1)
            perm = tuple(range(1, n + 1))
        elif kind == "Y":
            events = self.y_events(a_or_i, strand or 1)
            perm = tuple(range(1, n + 1))
        elif kind == "sigma":
            i = a_or_i
            events = self.sigma_events(i)
            perm = tuple(range(1, n + 1))
            perm = perm[:i - 1] + (perm[i], perm[i - 1]) + perm[i + 1:]
        else:
            raise ValueError(kind)
        series, _ = self.transporter.transport_events(events, base=self.base,
                                                      panels=panels)
        elem = GroupElement(self.env, series, perm)
        self._cache[key] = elem
        return elem

    # -- whole words, transported geometrically --------------------------

    def _letter_events(self, letter):
        kind, idx, expo = letter
        if kind == "s":
            # the inverse swap needs its own events: the slot assignment of a
            # reversed two-strand motion is crossed, not reversed
            return self.sigma_events(idx, inverse=expo < 0), idx
        if kind == "X":
            events = self.x_events(idx, 1)
        elif kind == "Y":
            events = self.y_events(idx, 1)
        else:
            raise ValueError(letter)
        if expo < 0:
            events = [ev.reversed() for ev in reversed(events)]
        return events, None

    def transport_word(self, letters, panels=None):
        """Transport the concatenated loop of a braid word.

        Letters are (kind, index, +-1) with kind in {"s", "X", "Y"}; X and Y
        act on strand 1 (the Bellingeri generators).  The path of each
        letter is the standard one relabeled through the current
        permutation of strand positions.
        """
        env = self.env
        T = env.unit()
        pi = list(range(1, self.ctx.n + 1))  # position -> strand
        for letter in letters:
            events, swap = self._letter_events(letter)
            relabeled = []
            for ev in events:
                if isinstance(ev, Jump):
                    relabeled.append(Jump(pi[ev.strand - 1], ev.a, ev.exponent))
                else:
                    relabeled.append(Segment(
                        {pi[k - 1]: mv for k, mv in ev.moves.items()}))
            series, _ = self.transporter.transport_events(
                relabeled, base=[self.base[_position_of(pi, s) - 1]
                                 for s in range(1, self.ctx.n + 1)],
                panels=panels)
            T = env.mult(T, series)
            if swap is not None:
                pi[swap - 1], pi[swap] = pi[swap], pi[swap - 1]
        return T, tuple(pi)


def _position_of(pi, strand):
    return pi.index(strand) + 1


def commutator_word(u, v):
    return u + v + _invert_word(u) + _invert_word(v)


def _invert_word(w):
    return [(k, i, -e) for (k, i, e) in reversed(w)]


def relation_words(g, n):
    """The defining relation words, each expected to be trivial (or the
    stated sigma product).  Returns (name, lhs letters, rhs letters) items."""
    rels = []
    for i in range(1, n - 1):
        lhs = [("s", i, 1), ("s", i + 1, 1), ("s", i, 1)]
        rhs = [("s", i + 1, 1), ("s", i, 1), ("s", i + 1, 1)]
        rels.append(("braid_%d" % i, lhs, rhs))
    for i in range(1, n - 1):
        for j in range(1, n - 1):
            if abs(i - j) > 1 and i < j:
                rels.append(("sigma_comm_%d_%d" % (i, j),
                             [("s", i, 1), ("s", j, 1)],
                             [("s", j, 1), ("s", i, 1)]))
    for a in range(1, g + 1):
        for i in range(2, n):
            rels.append(("X%d_sigma%d" % (a, i),
                         commutator_word([("X", a, 1)], [("s", i, 1)]), []))
            rels.append(("Y%d_sigma%d" % (a, i),
                         commutator_word([("Y", a, 1)], [("s", i, 1)]), []))
    if n >= 2:
        for a in range(1, g + 1):
            for z in ("X", "Y"):
                u = [("s", 1, -1), (z, a, 1), ("s", 1, -1)]
                rels.append(("%s%d_%s%d_comm" % (z, a, z, a),
                             commutator_word(u, [(z, a, 1)]), []))
        for a in range(1, g + 1):
            for b in range(a + 1, g + 1):
                for za in ("X", "Y"):
                    for zb in ("X", "Y"):
                        u = [("s", 1, -1), (za, a, 1), ("s", 1, -1)]
                        rels.append(("%s%d_%s%d_comm" % (za, a, zb, b),
                                     commutator_word(u, [(zb, b, 1)]), []))
    if n >= 2:
        for a in range(1, g + 1):
            # (sigma_1 X_a^{-1} sigma_1, Y_a^{-1}) = sigma_1^2
            u = [("s", 1, 1), ("X", a, -1), ("s", 1, 1)]
            v = [("Y", a, -1)]
            rels.append(("X%d_Y%d" % (a, a), commutator_word(u, v),
                         [("s", 1, 1), ("s", 1, 1)]))
        surface = []
        for a in range(1, g + 1):
            surface += commutator_word([("X", a, 1)], [("Y", a, -1)])
        # sigma_1 ... sigma_{n-1}^2 ... sigma_1
        rhs = [("s", i, 1) for i in range(1, n)] + \
              [("s", i, 1) for i in range(n - 1, 0, -1)]
        rels.append(("surface", surface, rhs))
    return rels


def verify_braid_relations(lab, safety=10.0):
    """Transport both sides of every relation word; report log differences."""
    env = lab.env
    reports = []
    budget = _integration_budget(lab)
    for name, lhs, rhs in relation_words(lab.ctx.g, lab.ctx.n):
        Tl, pl = lab.transport_word(lhs)
        if rhs:
            Tr, pr = lab.transport_word(rhs)
        else:
            Tr, pr = env.unit(), tuple(range(1, lab.ctx.n + 1))
        if pl != pr:
            reports.append({"check": "braid_" + name, "ok": False,
                            "error": "permutation parts differ: %r vs %r" % (pl, pr)})
            continue
        diff = env.mult(Tl, env.invert(Tr))
        lg = env.log(diff)
        by_deg = {}
        for w, c in lg.items():
            d = sum(env.lie_degree[k] for k in w)
            by_deg[d] = max(by_deg.get(d, 0.0), abs(c))
        resid = max(by_deg.values(), default=0.0)
        reports.append({"check": "braid_" + name, "residual": float(resid),
                        "budget": float(budget), "by_degree": by_deg,
                        "ok": bool(resid < budget * safety)})
    return reports


def _integration_budget(lab, probe=("s", 1, 1)):
    """Panel-doubling estimate of the transport error, plus series tails."""
    try:
        t1, _ = lab.transport_word([probe])
        t2, _ = lab.transport_word([probe], panels=2 * lab.transporter.panels)
        delta = lab.env.diff_norm(t1, t2)
    except Exception:
        delta = 0.0
    return delta + lab.transporter.tails + 1e-9


# -- named checks ---------------------------------------------------------

def _hol_report(name, residual, budget, safety=10.0, **extra):
    budget = max(budget, 1e-11)
    rep = {"check": name, "residual": float(residual), "budget": float(budget),
           "safety": safety, "ok": bool(residual < budget * safety)}
    rep.update(extra)
    return rep


def _log_by_degree(env, series):
    lg = env.log(series)
    out = {}
    for w, c in lg.items():
        d = sum(env.lie_degree[k] for k in w)
        out.setdefault(d, {})[w] = c
    return out, lg


def check_x_expansion(lab, a, i):
    """rho(X_a^i) = exp(y_a^i + degree >= 2)."""
    from .lie import y_ as ygen
    env = lab.env
    elem = lab.generator("X", a, strand=i)
    by_deg, _ = _log_by_degree(env, elem.series)
    fl = lab.ctx.quotient.lie
    want_idx = env.lie_index[(fl.index[ygen(a, i)],)]
    deg1 = by_deg.get(1, {})
    resid = abs(deg1.get((want_idx,), 0.0) - 1.0)
    for w, c in deg1.items():
        if w != (want_idx,):
            resid = max(resid, abs(c))
    budget = _integration_budget(lab)
    return _hol_report("rho_X_expansion", resid, budget, a=a, i=i,
                       grouplike_defect=env.grouplike_defect(elem.series),
                       perm_identity=elem.perm == tuple(range(1, lab.ctx.n + 1)))


def check_y_expansion(lab, a, i, tau):
    """rho(Y_a^i) = exp(x_a^i + sum_b tau_ab y_b^i + degree >= 2)."""
    from .lie import x_ as xgen, y_ as ygen
    env = lab.env
    elem = lab.generator("Y", a, strand=i)
    by_deg, _ = _log_by_degree(env, elem.series)
    fl = lab.ctx.quotient.lie
    deg1 = dict(by_deg.get(1, {}))
    want = {(env.lie_index[(fl.index[xgen(a, i)],)],): 1.0}
    for b in range(1, lab.ctx.g + 1):
        want[(env.lie_index[(fl.index[ygen(b, i)],)],)] = \
            TRANSPORT_SCALE * tau[a - 1, b - 1]
    keys = set(deg1) | set(want)
    resid = max(abs(deg1.get(k, 0.0) - want.get(k, 0.0)) for k in keys)
    budget = _integration_budget(lab)
    return _hol_report("rho_Y_expansion", resid, budget, a=a, i=i)


def check_sigma_squared(lab, i):
    """log rho(sigma_i^2) leading term against the contour-residue oracle.

    The counterclockwise double twist of the pair (i, i+1) winds z_i once
    counterclockwise around z_{i+1}, so its degree-2 log equals 2 pi i times
    the residue of the transport-normalized connection, i.e. minus the class
    of t_{i,i+1}.
    """
    from .lie import t_ as tgen
    env = lab.env
    T, perm = lab.transport_word([("s", i, 1), ("s", i, 1)])
    by_deg, lg = _log_by_degree(env, T)
    want = {}
    red = lab.ctx.quotient.reduce(lab.ctx.quotient.lie.gen(tgen(i, i + 1)))
    for m, c in red.items():
        want[(env.lie_index[m],)] = -complex(c)
    deg2 = by_deg.get(2, {})
    keys = set(deg2) | set(want)
    resid = max(abs(deg2.get(k, 0.0) - want.get(k, 0.0)) for k in keys)
    resid = max(resid, max((abs(c) for c in by_deg.get(1, {}).values()),
                           default=0.0))
    return _hol_report("sigma_squared_residue", resid, _integration_budget(lab),
                       i=i, perm_identity=perm == tuple(range(1, lab.ctx.n + 1)))


def check_concatenation(lab):
    """Geometric transport of a concatenation against the semidirect product."""
    env = lab.env
    reports = []
    for word in ([("s", 1, 1), ("s", 1, 1)],
                 [("X", 1, 1), ("s", 1, 1)],
                 [("s", 1, 1), ("Y", 1, 1)]):
        direct, perm = lab.transport_word(word)
        prod = GroupElement.identity(env, lab.ctx.n)
        for kind, idx, expo in word:
            gen = lab.generator({"s": "sigma", "X": "X", "Y": "Y"}[kind],
                                idx, strand=1 if kind != "s" else None)
            if expo < 0:
                gen = gen.inverse(lab.action)
            prod = prod.mul(gen, lab.action)
        resid = env.diff_norm(direct, prod.series)
        ok_perm = perm == prod.perm
        reports.append(_hol_report(
            "concatenation_%s" % "".join(k for k, _, _ in word), resid,
            _integration_budget(lab), perm_match=ok_perm))
        reports[-1]["ok"] = reports[-1]["ok"] and ok_perm
    return reports


def check_reparametrization(lab):
    """The same loop transported with two different panel subdivisions."""
    env = lab.env
    t1, _ = lab.transport_word([("X", 1, 1)])
    t2, _ = lab.transport_word([("X", 1, 1)], panels=3 * lab.transporter.panels // 2)
    return _hol_report("reparametrization", env.diff_norm(t1, t2),
                       _integration_budget(lab))


def check_degree1_quadrature(lab):
    """Degree-1 part of a transported loop against a direct line integral."""
    from .schottky import segment_nodes
    env = lab.env
    T, _ = lab.transport_word([("Y", 1, 1)])
    by_deg, _ = _log_by_degree(env, T)
    deg1 = by_deg.get(1, {})
    direct = {}
    events = lab.y_events(1, 1)
    base = list(lab.base)
    for ev in events:
        if isinstance(ev, Jump):
            fl = lab.ctx.quotient.lie
            from .lie import x_ as xgen
            red = lab.ctx.quotient.reduce(fl.gen(xgen(ev.a, ev.strand)))
            for m, c in red.items():
                k = env.lie_index[m]
                direct[(k,)] = direct.get((k,), 0.0) + ev.exponent * complex(c)
            base[ev.strand - 1] = mobius_apply(
                lab.ctx.group.gen_mats[ev.a - 1] if ev.exponent > 0
                else lab.ctx.group.inv_mats[ev.a - 1], base[ev.strand - 1])
            continue
        for k in ev.moves:
            nodes, weights = segment_nodes(0.0, 1.0, 24)
            for t, wgt in zip(nodes.real, weights.real):
                pts = ev.positions(base, t)
                val, _ = lab.ctx.alpha(pts, k)
                vel = ev.velocity(k, t)
                for m, c in val.items():
                    idx = env.lie_index.get(m)
                    if idx is not None and env.lie_degree[idx] == 1:
                        direct[(idx,)] = direct.get((idx,), 0.0) + \
                            TRANSPORT_SCALE * c * vel * wgt
        base = ev.endpoint(base)
    keys = {k for k in set(deg1) | set(direct)
            if env.lie_degree[k[0]] == 1}
    resid = max(abs(deg1.get(k, 0.0) - direct.get(k, 0.0)) for k in keys)
    return _hol_report("degree1_line_integral", resid, _integration_budget(lab))


def holonomy_suite(g, n, N=2, L=None, seed=0):
    """The full holonomy battery on the default genus-g instance."""
    from .connection import ConnectionContext
    from .schottky import period_matrix
    ctx = ConnectionContext(g, n, L=L)
    lab = BraidLab(ctx, N=N)
    tau = period_matrix(ctx.group, ctx.omega.holo)
    reports = []
    for i in range(1, n + 1):
        for a in range(1, g + 1):
            reports.append(check_x_expansion(lab, a, i))
            reports.append(check_y_expansion(lab, a, i, tau))
    reports.append(check_sigma_squared(lab, 1))
    reports.extend(check_concatenation(lab))
    reports.append(check_reparametrization(lab))
    reports.append(check_degree1_quadrature(lab))
    reports.extend(verify_braid_relations(lab))
    return reports

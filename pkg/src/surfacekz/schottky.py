"""Numerics on a Schottky-uniformized curve.

The group is generated by loxodromic Mobius maps given by fixed points and
multipliers.  The psi family is summed directly as a Poincare series with
exact rational word coefficients; the omega family is built level by level
in the string length: each member is a rational function on the circle
domain (Laurent tails on every Schottky disk plus an explicit pole term)
fitted by collocation to its deck-transformation jumps, with invariant
corrections pinning the a-cycle periods.

Conventions fixed here and used everywhere downstream:
  * circle(+a) is the isometric circle of gamma_a^{-1} (it contains the
    attracting fixed point alpha_a), circle(-a) that of gamma_a;
  * the fundamental domain is the exterior of all 2g circles;
  * the action on z-forms is gamma^(z) f = f(gamma^{-1} z) d(gamma^{-1} z),
    under which the psi series obeys the prefix-deletion automorphy;
  * the a-cycle pairing is I_A[form] = -(1/2 pi i) (ccw contour integral on
    circle(+a)).  With these choices the residue identity reads
    sum_P res_P(omega) + sum_a I_A_a[(gamma_a - 1) omega] = 0, the
    normalized differentials satisfy I_A_a[v_b] = delta_ab, the omega family
    has I_A-periods b_{m-1} delta, and res_{z=w} omega_(bb) = -1.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction

import numpy as np


class SchottkyValidationError(ValueError):
    """The generators do not satisfy the classical circle-disjointness test."""


def mobius_matrix(alpha, beta, q):
    """Normalized (det 1) matrix of the map fixing alpha, beta with multiplier q."""
    s = np.array([[1.0, -alpha], [1.0, -beta]], dtype=complex)
    d = np.array([[q, 0.0], [0.0, 1.0]], dtype=complex)
    m = np.linalg.inv(s) @ d @ s
    return m / np.sqrt(np.linalg.det(m))


def mobius_apply(m, z):
    a, b, c, d = m[0, 0], m[0, 1], m[1, 0], m[1, 1]
    den = c * z + d
    return (a * z + b) / den


def mobius_derivative(m, z):
    c, d = m[1, 0], m[1, 1]
    return 1.0 / (c * z + d) ** 2


def isometric_circle(m):
    """Center and radius of {|cz + d| = 1} for a det-1 matrix."""
    c, d = m[1, 0], m[1, 1]
    if abs(c) < 1e-14:
        raise SchottkyValidationError("parabolic-like generator: c = 0")
    return -d / c, 1.0 / abs(c)


@dataclass
class Word:
    letters: tuple       # signed letters, +a / -a with a in 1..g
    mat: np.ndarray


def reduce_letters(letters):
    out = []
    for l in letters:
        if out and out[-1] == -l:
            out.pop()
        else:
            out.append(l)
    return tuple(out)


class SchottkyGroup:
    def __init__(self, alphas, betas, qs, validate=True):
        if not (len(alphas) == len(betas) == len(qs)):
            raise ValueError("need matching parameter lists")
        self.g = len(alphas)
        self.alphas = [complex(a) for a in alphas]
        self.betas = [complex(b) for b in betas]
        self.qs = [complex(q) for q in qs]
        if any(abs(q) >= 1 for q in self.qs):
            raise SchottkyValidationError("multipliers must satisfy |q| < 1")
        self.gen_mats = [mobius_matrix(a, b, q)
                         for a, b, q in zip(self.alphas, self.betas, self.qs)]
        self.inv_mats = [np.linalg.inv(m) for m in self.gen_mats]
        self.circles = {}
        for a in range(1, self.g + 1):
            self.circles[a] = isometric_circle(self.inv_mats[a - 1])
            self.circles[-a] = isometric_circle(self.gen_mats[a - 1])
        if validate:
            self._validate()
        self._word_cache = {}

    def _validate(self):
        rng = np.random.default_rng(7)
        for a, b, q, m in zip(self.alphas, self.betas, self.qs, self.gen_mats):
            for _ in range(8):
                z = complex(rng.normal(), rng.normal()) * 2.0
                lhs = (mobius_apply(m, z) - a) / (mobius_apply(m, z) - b)
                rhs = q * (z - a) / (z - b)
                if abs(lhs - rhs) > 1e-10 * max(1.0, abs(rhs)):
                    raise SchottkyValidationError("cross-ratio law fails for a generator")
        keys = sorted(self.circles)
        for u, v in itertools.combinations(keys, 2):
            cu, ru = self.circles[u]
            cv, rv = self.circles[v]
            if abs(cu - cv) <= ru + rv:
                raise SchottkyValidationError(
                    "isometric circles %d and %d overlap; not a Schottky configuration"
                    % (u, v))

    def letter_matrix(self, l):
        return self.gen_mats[l - 1] if l > 0 else self.inv_mats[-l - 1]

    def word_matrix(self, letters):
        m = np.eye(2, dtype=complex)
        for l in letters:
            m = m @ self.letter_matrix(l)
        return m

    def apply_letters(self, letters, z):
        return mobius_apply(self.word_matrix(reduce_letters(letters)), z)

    def in_fundamental_domain(self, z, margin=0.0):
        return all(abs(z - c) > r * (1.0 + margin) for c, r in self.circles.values())

    def words_by_shell(self, L):
        """Reduced words grouped by length, 0..L, with matrices."""
        if L in self._word_cache:
            return self._word_cache[L]
        shells = [[Word((), np.eye(2, dtype=complex))]]
        letters = [a for a in range(1, self.g + 1)] + [-a for a in range(1, self.g + 1)]
        for _ in range(L):
            nxt = []
            for w in shells[-1]:
                for l in letters:
                    if w.letters and w.letters[-1] == -l:
                        continue
                    nxt.append(Word(w.letters + (l,), w.mat @ self.letter_matrix(l)))
            shells.append(nxt)
        self._word_cache[L] = shells
        return shells

    def a_circle(self, a, scale=1.0):
        """Center and radius of the a-cycle contour (circle(+a), ccw)."""
        c, r = self.circles[a]
        return c, r * scale


def default_group(g):
    if g == 1:
        return SchottkyGroup([-1.0], [1.0], [0.1])
    if g == 2:
        return SchottkyGroup([-2.0, 2.0], [-1.0, 1.0], [0.02, 0.02])
    raise ValueError("default instances exist for g = 1, 2 only")


# -- exact word coefficients ---------------------------------------------------

def word_runs(letters):
    """Run-length form ((e_1, lam_1), ...) with e in 1..g and lam in Z."""
    runs = []
    for l in letters:
        e, s = abs(l), (1 if l > 0 else -1)
        if runs and runs[-1][0] == e and (runs[-1][1] > 0) == (s > 0):
            runs[-1][1] += s
        else:
            runs.append([e, s])
    return tuple((e, lam) for e, lam in runs)


def f_coeff(indices, letters):
    """Exact coefficient of the word X_{a_1}..X_{a_s} in prod_t exp(-lam_t X_{e_t}).

    indices: tuple of handle labels (1..g); letters: signed-letter word.
    The empty index string gives 1 on every group element.
    """
    runs = word_runs(reduce_letters(letters))
    s = len(indices)
    if s == 0:
        return Fraction(1)
    # dp over blocks: split the index string into consecutive runs of equal
    # letters matching the run letters
    from functools import lru_cache

    @lru_cache(maxsize=None)
    def block(t, pos):
        if t == len(runs):
            return Fraction(1) if pos == s else Fraction(0)
        e, lam = runs[t]
        total = Fraction(0)
        k = 0
        fact = 1
        while pos + k <= s:
            if k > 0:
                fact *= k
            if k == 0 or indices[pos + k - 1] == e:
                total += Fraction((-lam) ** k, fact) * block(t + 1, pos + k)
            else:
                break
            k += 1
        return total

    return block(0, 0)


def e_series(letters, degree, g):
    """Truncated group-like series of a word: all f-coefficients up to degree."""
    out = {(): Fraction(1)}
    for l in letters:
        e, s = abs(l), (1 if l > 0 else -1)
        # multiply by exp(-s X_e) on the right
        new = {}
        for word, c in out.items():
            fact = 1
            for k in range(degree - len(word) + 1):
                if k > 0:
                    fact *= k
                coeff = c * Fraction((-s) ** k, fact)
                key = word + (e,) * k
                new[key] = new.get(key, Fraction(0)) + coeff
        out = {w: c for w, c in new.items() if c}
    return out


def all_strings(g, degree):
    out = []
    for d in range(degree + 1):
        out.extend(itertools.product(range(1, g + 1), repeat=d))
    return out


# -- quadrature ----------------------------------------------------------------

def circle_nodes(center, radius, n):
    """Trapezoidal nodes and dz-weights for a ccw circle contour."""
    theta = 2.0 * np.pi * np.arange(n) / n
    z = center + radius * np.exp(1j * theta)
    dz = 1j * radius * np.exp(1j * theta) * (2.0 * np.pi / n)
    return z, dz


def a_cycle_integral(values, dz):
    """The pairing I_A: minus 1/(2 pi i) times the ccw contour sum."""
    return -np.sum(values * dz) / (2j * np.pi)

_GL_CACHE = {}


def segment_nodes(z0, z1, n):
    """Gauss-Legendre nodes and dz-weights on a straight segment."""
    if n not in _GL_CACHE:
        _GL_CACHE[n] = np.polynomial.legendre.leggauss(n)
    x, w = _GL_CACHE[n]
    t = 0.5 * (x + 1.0)
    z = z0 + (z1 - z0) * t
    dz = (z1 - z0) * 0.5 * w
    return z, dz


def path_nodes(points, n_per_seg):
    zs, ws = [], []
    for z0, z1 in zip(points[:-1], points[1:]):
        z, w = segment_nodes(z0, z1, n_per_seg)
        zs.append(z)
        ws.append(w)
    return np.concatenate(zs), np.concatenate(ws)


# -- the psi family ------------------------------------------------------------

class PsiSeries:
    """Poincare series evaluators for the psi family and its w-primitives.

    psi_{a_1..a_s}(z, w) = sum_gamma f_{a_1..a_s}(gamma) gamma'(w)/(z - gamma w)^2
    (coefficient of dz dw), truncated at word length L.  The reported tail is
    a geometric extrapolation of the last length shell.
    """

    def __init__(self, group, L, degree):
        self.group = group
        self.L = L
        self.degree = degree
        self.strings = all_strings(group.g, degree)
        shells = group.words_by_shell(L)
        self._shells = []
        for shell in shells:
            entries = []
            for wrd in shell:
                es = e_series(wrd.letters, degree, group.g)
                entries.append((wrd.mat, {k: float(v) for k, v in es.items()}))
            self._shells.append(entries)

    def _sum_kernel(self, kernel, z, strings=None):
        """Sum E(gamma)-weighted kernels; kernel(mat, z) -> array."""
        strings = self.strings if strings is None else strings
        acc = {s: 0.0 + 0.0j for s in strings}
        shell_mags = []
        for entries in self._shells:
            mag = 0.0
            for mat, es in entries:
                ker = kernel(mat, z)
                kmag = float(np.max(np.abs(ker)))
                cmax = 0.0
                for s in strings:
                    c = es.get(s)
                    if c:
                        acc[s] = acc[s] + c * ker
                        cmax = max(cmax, abs(c))
                mag += cmax * kmag
            shell_mags.append(mag)
        tail = tail_estimate(shell_mags)
        return acc, tail

    def psi(self, z, w):
        """All psi strings at (z, w); z may be an ndarray."""
        z = np.asarray(z, dtype=complex)

        def kernel(mat, zz):
            gw = mobius_apply(mat, w)
            return mobius_derivative(mat, w) / (zz - gw) ** 2

        return self._sum_kernel(kernel, z)

    def psi3(self, z, w, wp):
        """psi^{z w w'} strings: the w-primitive sum of kernel differences."""
        z = np.asarray(z, dtype=complex)

        def kernel(mat, zz):
            return 1.0 / (zz - mobius_apply(mat, wp)) - 1.0 / (zz - mobius_apply(mat, w))

        return self._sum_kernel(kernel, z)

    def psi3_quadrature(self, indices, z, w, wp, n=32):
        """Independent path-quadrature evaluation of psi^{z w w'}: integrate the
        psi series in its second argument along the straight segment."""
        nodes, weights = segment_nodes(w, wp, n)
        total = 0.0 + 0.0j
        tails = 0.0
        for node, wt in zip(nodes, weights):
            vals, tail = self.psi(np.asarray([z]), node)
            total += wt * vals[indices][0]
            tails = max(tails, tail)
        return total, tails


def tail_estimate(shell_mags):
    mags = [m for m in shell_mags if m > 0]
    if len(mags) < 2:
        return 0.0
    ratio = min(0.9, mags[-1] / mags[-2]) if mags[-2] > 0 else 0.9
    return mags[-1] * ratio / (1.0 - ratio)


# -- holomorphic differentials -------------------------------------------------

class HolomorphicBasis:
    """Normalized holomorphic differentials via Burnside coset series.

    v_e is summed over reduced words not ending in a letter of handle e,
    applied to the two fixed points of gamma_e; the raw candidates are then
    normalized so that the a-periods are exactly the identity matrix.
    """

    def __init__(self, group, L, nodes=128):
        self.group = group
        self.L = L
        g = group.g
        shells = group.words_by_shell(L)
        self._coset_words = []
        for e in range(1, g + 1):
            words = []
            for shell in shells:
                for wrd in shell:
                    if wrd.letters and abs(wrd.letters[-1]) == e:
                        continue
                    words.append((wrd.mat @ np.array([[group.alphas[e - 1]], [1.0]]),
                                  wrd.mat @ np.array([[group.betas[e - 1]], [1.0]])))
            self._coset_words.append(words)
        period = np.zeros((g, g), dtype=complex)
        for a in range(1, g + 1):
            c, r = group.a_circle(a, scale=1.05)
            z, dz = circle_nodes(c, r, nodes)
            for e in range(g):
                period[a - 1, e] = a_cycle_integral(self._raw(e, z), dz)
        cond = np.linalg.cond(period)
        if cond > 1e8:
            raise ArithmeticError("holomorphic normalization ill-conditioned: %.2e" % cond)
        self._norm = np.linalg.inv(period)

    def _raw(self, e, z):
        z = np.asarray(z, dtype=complex)
        acc = np.zeros_like(z)
        for pa, pb in self._coset_words[e]:
            za = pa[0, 0] / pa[1, 0]
            zb = pb[0, 0] / pb[1, 0]
            acc = acc + 1.0 / (z - za) - 1.0 / (z - zb)
        return acc

    def eval(self, z):
        """Array of shape (g,) + z.shape with the normalized v_e values."""
        z = np.asarray(z, dtype=complex)
        raw = np.stack([self._raw(e, z) for e in range(self.group.g)])
        return np.tensordot(self._norm.T, raw, axes=1)


def bernoulli_b(s):
    """Coefficient of t^s in t/(e^t - 1), exact."""
    from math import factorial
    if s == 0:
        return Fraction(1)
    total = Fraction(0)
    # recursion sum_{k=0}^{s} b_k / (s + 1 - k)! = 0 for s >= 1
    for k in range(s):
        total += bernoulli_b(k) * Fraction(1, factorial(s + 1 - k))
    return -total


# -- the omega family ----------------------------------------------------------

class OmegaFamily:
    """The omega string family at a fixed auxiliary point w.

    Level m strings are fitted as

        omega_c(z) = pole term + sum_{circles j} sum_{k=1..K} coef/(z - c_j)^k
                     + sum_e lambda_e v_e(z)

    where the Laurent coefficients solve the deck-jump conditions

        omega_c(gamma_a^{-1} z) d(gamma_a^{-1} z)/dz - omega_c(z)
            = sum_{k>=1} (1/k!) [a = c_1 = .. = c_k] omega_{c_{k+1}..}(z)

    at collocation nodes on the a-circles, and the invariant corrections
    lambda_e enforce the a-periods b_{m-1} delta_{e c_1 ... c_m}.
    """

    def __init__(self, group, L, degree, w, nodes=64, laurent=18, period_nodes=128,
                 collocation_scale=1.12, pole_depth=3):
        self.group = group
        self.w = complex(w)
        self.degree = degree
        self.holo = HolomorphicBasis(group, L, nodes=period_nodes)
        self.nodes = nodes
        self.laurent = laurent
        g = group.g
        self.centers = [group.circles[c][0] for c in sorted(group.circles)]
        self.radii = [group.circles[c][1] for c in sorted(group.circles)]
        # orbit poles of the family, subtracted explicitly: at z = gamma w the
        # string c has residue -delta_{c_{m-1} c_m} f_{c_1..c_{m-2}}(gamma)
        self._orbit = []
        for shell in group.words_by_shell(pole_depth):
            for wrd in shell:
                self._orbit.append((wrd.letters, mobius_apply(wrd.mat, self.w)))
        self._coeffs = {}   # string -> (laurent coeffs, lambda vector, pole weights)
        self._fit_diag = 0.0
        strings = [s for s in all_strings(g, degree) if s]
        strings.sort(key=len)
        for s in strings:
            if len(s) == 1:
                continue  # level 1 is the holomorphic basis
            self._solve_string(s, collocation_scale)
        # the honest fit quality is the jump misfit off the collocation nodes
        self._fit_diag = max(self._fit_diag, self._offnode_jump_residual(
            [s for s in strings if len(s) >= 2], collocation_scale))

    # evaluation ---------------------------------------------------------

    def _laurent_eval(self, coeffs, z):
        z = np.asarray(z, dtype=complex)
        acc = np.zeros_like(z)
        i = 0
        for c, r in zip(self.centers, self.radii):
            for k in range(1, self.laurent + 1):
                acc = acc + coeffs[i] * (r / (z - c)) ** k
                i += 1
        return acc

    def _pole_weights(self, s):
        """Residue weights at the orbit points for a string, or None."""
        if len(s) < 2 or s[-1] != s[-2]:
            return None
        prefix = s[:-2]
        weights = [-float(f_coeff(prefix, letters)) for letters, _ in self._orbit]
        if not any(weights):
            return None
        return np.asarray(weights)

    def _pole_eval(self, weights, z):
        z = np.asarray(z, dtype=complex)
        acc = np.zeros_like(z)
        for wgt, (_, p) in zip(weights, self._orbit):
            if wgt:
                acc = acc + wgt / (z - p)
        return acc

    def eval_string(self, s, z):
        """omega_s(z, w) for the fixed w; z scalar or ndarray, inside the domain."""
        z = np.asarray(z, dtype=complex)
        if len(s) == 1:
            return self.holo.eval(z)[s[0] - 1]
        coeffs, lam, weights = self._coeffs[s]
        val = self._laurent_eval(coeffs, z)
        if weights is not None:
            val = val + self._pole_eval(weights, z)
        holo = self.holo.eval(z)
        for e in range(self.group.g):
            val = val + lam[e] * holo[e]
        return val

    def eval_all(self, z, max_len=None):
        out = {}
        for s in all_strings(self.group.g, self.degree):
            if not s:
                continue
            if max_len is not None and len(s) > max_len:
                continue
            out[s] = self.eval_string(s, z)
        return out

    # construction --------------------------------------------------------

    def _jump_rhs(self, s, a, z):
        """sum_{k>=1} (1/k!) delta_{a c_1..c_k} omega_{suffix}(z); empty suffix -> 0."""
        out = np.zeros_like(np.asarray(z, dtype=complex))
        fact = 1
        for k in range(1, len(s)):
            fact *= k
            if any(c != a for c in s[:k]):
                break
            out = out + self.eval_string(s[k:], z) / fact
        return out

    def _solve_string(self, s, scale):
        group = self.group
        g = group.g
        m = len(s)
        weights = self._pole_weights(s)
        ncoef = len(self.centers) * self.laurent
        rows = []
        rhs = []
        for a in range(1, g + 1):
            mat_inv = group.inv_mats[a - 1]
            c, r = group.a_circle(a, scale=scale)
            znodes = c + r * np.exp(2j * np.pi * np.arange(self.nodes) / self.nodes)
            zt = mobius_apply(mat_inv, znodes)
            dzt = mobius_derivative(mat_inv, znodes)
            # unknown-coefficient part of the jump defect
            basis_here = np.zeros((znodes.size, ncoef), dtype=complex)
            i = 0
            for cc, rr in zip(self.centers, self.radii):
                for k in range(1, self.laurent + 1):
                    basis_here[:, i] = (rr / (zt - cc)) ** k * dzt - (rr / (znodes - cc)) ** k
                    i += 1
            target = self._jump_rhs(s, a, znodes)
            if weights is not None:
                pole_jump = self._pole_eval(weights, zt) * dzt - self._pole_eval(weights, znodes)
                target = target - pole_jump
            # invariant corrections have no jump: they do not enter these rows
            rows.append(basis_here)
            rhs.append(target)
        A = np.vstack(rows)
        b = np.concatenate(rhs)
        coeffs, *_ = np.linalg.lstsq(A, b, rcond=None)
        resid = float(np.max(np.abs(A @ coeffs - b))) if b.size else 0.0
        self._fit_diag = max(self._fit_diag, resid)
        # a-periods: fix the invariant part
        lam = np.zeros(g, dtype=complex)
        self._coeffs[s] = (coeffs, lam, weights)
        periods = np.zeros(g, dtype=complex)
        for e in range(1, g + 1):
            c, r = group.a_circle(e, scale=1.05)
            z, dz = circle_nodes(c, r, 128)
            periods[e - 1] = a_cycle_integral(self.eval_string(s, z), dz)
        want = np.zeros(g, dtype=complex)
        if all(c == s[0] for c in s):
            want[s[0] - 1] = float(bernoulli_b(m - 1))
        lam[:] = want - periods
        self._coeffs[s] = (coeffs, lam, weights)

    def _offnode_jump_residual(self, strings, scale, offset=0.5, nodes=48):
        group = self.group
        worst = 0.0
        for a in range(1, group.g + 1):
            c, r = group.a_circle(a, scale=scale)
            th = 2 * np.pi * (np.arange(nodes) + offset) / nodes
            z = c + r * np.exp(1j * th)
            minv = group.inv_mats[a - 1]
            zt = mobius_apply(minv, z)
            dzt = mobius_derivative(minv, z)
            for s in strings:
                lhs = self.eval_string(s, zt) * dzt - self.eval_string(s, z)
                rhs = self._jump_rhs(s, a, z)
                worst = max(worst, float(np.max(np.abs(lhs - rhs))))
        return worst

    @property
    def fit_residual(self):
        return self._fit_diag


# -- derived numerics ----------------------------------------------------------

def period_matrix(group, holo, z0=None, n_per_seg=48):
    """tau_ab = int over the b-path z0 -> gamma_a^{-1}(z0) of v_b.

    The b-path direction matches the braid generator Y_a, which crosses the
    cut by the gamma_a identification; at genus 1 this gives -log q for the
    I_A-normalized differential.
    """
    g = group.g
    if z0 is None:
        z0 = _default_basepoint(group)
    tau = np.zeros((g, g), dtype=complex)
    for a in range(1, g + 1):
        z1 = mobius_apply(group.inv_mats[a - 1], z0)
        z, dz = segment_nodes(z0, z1, n_per_seg)
        vals = holo.eval(z)
        for b in range(g):
            tau[a - 1, b] = np.sum(vals[b] * dz)
    return tau


def _default_basepoint(group):
    for cand in (0.0, 0.3j, 0.1 + 0.2j, -0.25j):
        if group.in_fundamental_domain(complex(cand), margin=0.05):
            return complex(cand)
    raise ValueError("no default basepoint inside the fundamental domain")


def residue_formula_residual(group, form, poles, n_circle=96, scale=1.05,
                             pole_radius=1e-2):
    """Numeric residual of sum_res + sum_a I_A[(gamma_a - 1) form].

    `form` maps an ndarray of z to values (dz-coefficient); `poles` lists the
    pole locations inside the fundamental domain.  The deck difference is
    evaluated as form(gamma_a^{-1} z) d(gamma_a^{-1} z) - form(z) dz.
    """
    total = 0.0 + 0.0j
    for p in poles:
        z, dz = circle_nodes(p, pole_radius, n_circle)
        total += np.sum(form(z) * dz) / (2j * np.pi)
    for a in range(1, group.g + 1):
        c, r = group.a_circle(a, scale=scale)
        z, dz = circle_nodes(c, r, n_circle)
        minv = group.inv_mats[a - 1]
        zt = mobius_apply(minv, z)
        dzt = mobius_derivative(minv, z)
        total += a_cycle_integral(form(zt) * dzt - form(z), dz)
    return abs(total)

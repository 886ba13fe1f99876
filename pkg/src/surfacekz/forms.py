"""Named numerical checks for the differential-form families.

Every check returns a dict with at least {check, residual, budget, ok}; the
budget is an honest estimate (series tail + collocation fit residual +
quadrature floor) and ok means residual < budget * safety.
"""

from __future__ import annotations

import math

import numpy as np

from .schottky import (HolomorphicBasis, OmegaFamily, PsiSeries, a_cycle_integral,
                       bernoulli_b, circle_nodes, default_group, mobius_apply,
                       mobius_derivative, period_matrix, residue_formula_residual)

QUAD_FLOOR = 1e-11


def _report(name, residual, budget, safety=10.0, **extra):
    budget = max(budget, QUAD_FLOOR)
    rep = {"check": name, "residual": float(residual), "budget": float(budget),
           "safety": safety, "ok": bool(residual < budget * safety)}
    rep.update(extra)
    return rep


def sample_points(group, count, seed, margin=0.1):
    """Deterministic sample points inside the fundamental domain."""
    rng = np.random.default_rng(seed)
    pts = []
    guard = 0
    while len(pts) < count:
        guard += 1
        if guard > 10000:
            raise RuntimeError("could not sample enough domain points")
        z = complex(rng.uniform(-0.8, 0.8), rng.uniform(-0.8, 0.8))
        if group.in_fundamental_domain(z, margin=margin):
            if all(abs(z - p) > 0.05 for p in pts):
                pts.append(z)
    return pts


def check_psi_symmetry(group, L, degree, seed=0, npts=6):
    psi = PsiSeries(group, L, degree)
    pts = sample_points(group, 2 * npts, seed)
    worst, tail = 0.0, 0.0
    for z, w in zip(pts[:npts], pts[npts:]):
        vz, t1 = psi.psi(np.asarray([z]), w)
        vw, t2 = psi.psi(np.asarray([w]), z)
        tail = max(tail, t1, t2)
        for s in vz:
            lhs = vw[tuple(reversed(s))][0]
            rhs = (-1) ** len(s) * vz[s][0]
            worst = max(worst, abs(lhs - rhs))
    return _report("psi_symmetry", worst, tail, L=L, points=npts)


def check_psi_automorphy(group, L, degree, seed=1, npts=5):
    psi = PsiSeries(group, L, degree)
    pts = sample_points(group, npts + 1, seed)
    w = pts[-1]
    z = np.asarray(pts[:npts])
    vals, tail = psi.psi(z, w)
    worst = 0.0
    for a in range(1, group.g + 1):
        minv = group.inv_mats[a - 1]
        zt = mobius_apply(minv, z)
        dzt = mobius_derivative(minv, z)
        tv, t2 = psi.psi(zt, w)
        tail = max(tail, t2)
        for s in vals:
            lhs = tv[s] * dzt
            rhs = np.zeros_like(lhs)
            for k in range(len(s) + 1):
                if any(c != a for c in s[:k]):
                    break
                rhs = rhs + vals[s[k:]] / math.factorial(k)
            worst = max(worst, float(np.max(np.abs(lhs - rhs))))
    return _report("psi_automorphy", worst, tail, L=L)


def check_psi_aperiod(group, L, degree, seed=2, nodes=192):
    psi = PsiSeries(group, L, degree)
    # keep w away from the contours: a nearby double pole would spoil the
    # trapezoid rule long before it spoils the identity
    w = sample_points(group, 1, seed, margin=0.4)[0]
    worst, tail = 0.0, 0.0
    for a in range(1, group.g + 1):
        c, r = group.a_circle(a, scale=1.1)
        z, dz = circle_nodes(c, r, nodes)
        vals, t = psi.psi(z, w)
        tail = max(tail, t)
        for s in vals:
            worst = max(worst, abs(a_cycle_integral(vals[s], dz)))
    return _report("psi_aperiod", worst, tail, L=L)


def check_omega_aperiod(omega, nodes=144, scale=1.16):
    """a-periods of the omega family on contours independent of the solve."""
    group = omega.group
    worst = 0.0
    for e in range(1, group.g + 1):
        c, r = group.a_circle(e, scale=scale)
        z, dz = circle_nodes(c, r, nodes)
        vals = omega.eval_all(z)
        for s, v in vals.items():
            per = a_cycle_integral(v, dz)
            want = 0.0
            if all(ch == s[0] for ch in s) and s[0] == e:
                want = float(bernoulli_b(len(s) - 1))
            worst = max(worst, abs(per - want))
    return _report("omega_aperiod", worst, omega.fit_residual)


def check_omega_residue(omega, nodes=64, radius=1e-2):
    """Residue of omega at the diagonal: -1 for (bb) strings, 0 otherwise."""
    z, dz = circle_nodes(omega.w, radius, nodes)
    vals = omega.eval_all(z)
    worst = 0.0
    for s, v in vals.items():
        res = np.sum(v * dz) / (2j * np.pi)
        want = -1.0 if (len(s) == 2 and s[0] == s[1]) else 0.0
        worst = max(worst, abs(res - want))
    return _report("omega_residue", worst, omega.fit_residual)


def check_omega_jump(omega, offsets=(0.31,), scale=1.07, nodes=37):
    """The z-automorphy of the omega family at non-collocation nodes."""
    group = omega.group
    worst = 0.0
    for a in range(1, group.g + 1):
        c, r = group.a_circle(a, scale=scale)
        for off in offsets:
            th = 2 * np.pi * (np.arange(nodes) + off) / nodes
            z = c + r * np.exp(1j * th)
            minv = group.inv_mats[a - 1]
            zt = mobius_apply(minv, z)
            dzt = mobius_derivative(minv, z)
            vals = omega.eval_all(z)
            for s in vals:
                lhs = omega.eval_string(s, zt) * dzt - vals[s]
                rhs = np.zeros_like(lhs)
                for k in range(1, len(s)):
                    if any(ch != a for ch in s[:k]):
                        break
                    rhs = rhs + vals[s[k:]] / math.factorial(k)
                worst = max(worst, float(np.max(np.abs(lhs - rhs))))
    return _report("omega_automorphy", worst, omega.fit_residual)


def check_w_difference(group, L, degree, w, wp, seed=3, npts=4):
    """omega_{c bb}^{z w} - omega_{c bb}^{z w'} = psi3_c(z, w, w')."""
    om1 = OmegaFamily(group, L, degree, w)
    om2 = OmegaFamily(group, L, degree, wp)
    psi = PsiSeries(group, L, max(degree - 2, 0))
    z = np.asarray(sample_points(group, npts, seed))
    p3, tail = psi.psi3(z, w, wp)
    worst = 0.0
    for s in p3:
        if len(s) + 2 > degree:
            continue
        for b in range(1, group.g + 1):
            full = s + (b, b)
            lhs = om1.eval_string(full, z) - om2.eval_string(full, z)
            worst = max(worst, float(np.max(np.abs(lhs - p3[s]))))
    budget = tail + om1.fit_residual + om2.fit_residual
    return _report("omega_w_difference", worst, budget)


def check_lemma4a(group, L, degree, w, wp, seed=4, npts=4):
    """Strings with distinct last two letters are constant in w."""
    if group.g < 2:
        return _report("omega_w_independence", 0.0, 0.0, skipped="needs g >= 2")
    om1 = OmegaFamily(group, L, degree, w)
    om2 = OmegaFamily(group, L, degree, wp)
    z = np.asarray(sample_points(group, npts, seed))
    worst = 0.0
    for s, v in om1.eval_all(z).items():
        if len(s) >= 2 and s[-1] != s[-2]:
            worst = max(worst, float(np.max(np.abs(v - om2.eval_string(s, z)))))
    budget = om1.fit_residual + om2.fit_residual
    return _report("omega_w_independence", worst, budget)


def check_gamma_w(group, L, degree, w, seed=5, npts=4):
    """The w-automorphy of the omega family:

    (gamma_a^(w) - 1) omega_{a_1..a_s b b}
        = sum_{k>=0} (-1)^{k+1}/(k+1)! [a = a_s = .. = a_{s-k+1}]
          omega_{a_1..a_{s-k} a}.

    The translated value is the analytic continuation in w, realized by
    psi3 transport: omega(z, gamma_a^{-1} w) = omega(z, w) - psi3(z, w,
    gamma_a^{-1} w).  The check therefore plays the psi series against the
    independently fitted omega family.
    """
    base = OmegaFamily(group, L, degree, w)
    psi = PsiSeries(group, L, max(degree - 2, 0))
    z = np.asarray(sample_points(group, npts, seed))
    worst = 0.0
    budget = base.fit_residual
    for a in range(1, group.g + 1):
        wt = mobius_apply(group.inv_mats[a - 1], w)
        p3, tail = psi.psi3(z, w, wt)
        budget = max(budget, tail + base.fit_residual)
        for s in base.eval_all(z):
            if len(s) < 2 or s[-1] != s[-2]:
                continue
            head = s[:-2]
            lhs = -p3[head]
            rhs = np.zeros_like(np.asarray(lhs))
            for k in range(0, len(head) + 1):
                # delta over (a, a_s, ..., a_{s-k+1}): the last k letters of head
                if any(c != a for c in head[len(head) - k:]):
                    break
                rhs = rhs + (-1.0) ** (k + 1) / math.factorial(k + 1) * \
                    base.eval_string(head[:len(head) - k] + (a,), z)
            worst = max(worst, float(np.max(np.abs(lhs - rhs))))
    return _report("omega_gamma_w", worst, budget)


def check_psi3_additivity(group, L, degree, seed=6):
    psi = PsiSeries(group, L, degree)
    pts = sample_points(group, 5, seed)
    z = np.asarray(pts[:2])
    w, wp, wpp = pts[2], pts[3], pts[4]
    v1, t1 = psi.psi3(z, w, wp)
    v2, t2 = psi.psi3(z, wp, wpp)
    v3, t3 = psi.psi3(z, w, wpp)
    worst = max(float(np.max(np.abs(v1[s] + v2[s] - v3[s]))) for s in v1)
    return _report("psi3_additivity", worst, t1 + t2 + t3)


def check_psi3_quadrature(group, L, degree, seed=12):
    """Closed-form psi3 against independent Gauss-Legendre path quadrature."""
    psi = PsiSeries(group, L, degree)
    pts = sample_points(group, 3, seed)
    z, w, wp = pts
    closed, t1 = psi.psi3(np.asarray([z]), w, wp)
    worst, tails = 0.0, t1
    for s in closed:
        quad, t2 = psi.psi3_quadrature(s, z, w, wp, n=32)
        tails = max(tails, t2)
        worst = max(worst, abs(quad - closed[s][0]))
    return _report("psi3_quadrature", worst, tails + 1e-9)


def check_psi3_wprime_automorphy(group, L, degree, w_aux, seed=7, npts=3):
    """The third displayed identity: gamma_a^(w') psi3 in terms of psi3 and omega."""
    psi = PsiSeries(group, L, degree)
    omega = OmegaFamily(group, L, degree + 2, w_aux)
    pts = sample_points(group, npts + 2, seed)
    z = np.asarray(pts[:npts])
    w, wp = pts[npts], pts[npts + 1]
    vals, tail = psi.psi3(z, w, wp)
    worst = 0.0
    for a in range(1, group.g + 1):
        wpt = mobius_apply(group.inv_mats[a - 1], wp)
        moved, t2 = psi.psi3(z, w, wpt)
        tail = max(tail, t2)
        for s in vals:
            lhs = moved[s]
            rhs = np.zeros_like(lhs)
            for k in range(0, len(s) + 1):
                if any(c != a for c in s[len(s) - k:]):
                    break
                rhs = rhs + (-1.0) ** k / math.factorial(k) * vals[s[:len(s) - k]]
            for k in range(1, len(s) + 2):
                if any(c != a for c in s[len(s) - k + 1:]):
                    break
                head = s[:len(s) - k + 1] + (a,)
                if len(head) <= omega.degree:
                    rhs = rhs + (-1.0) ** (k - 1) / math.factorial(k) * \
                        omega_at(omega, psi, head, z, w_aux, w)
            worst = max(worst, float(np.max(np.abs(lhs - rhs))))
    budget = tail + omega.fit_residual
    return _report("psi3_wprime_automorphy", worst, budget)


def omega_at(omega, psi, s, z, w_built, w_target):
    """omega_s(z, w_target) from a family built at w_built, moved by psi3."""
    val = omega.eval_string(s, z)
    if len(s) >= 2 and s[-1] == s[-2] and w_target != w_built:
        p3, _ = psi.psi3(z, w_built, w_target)
        val = val - p3[s[:-2]]
    return val


def check_residue_formula(group, L, degree, w, seed=8):
    """The residue identity on three form types: holomorphic, omega, psi3."""
    holo = HolomorphicBasis(group, L)
    omega = OmegaFamily(group, L, degree, w)
    psi = PsiSeries(group, L, degree)
    pts = sample_points(group, 2, seed)
    wp = pts[0]
    results = {}
    worst = 0.0
    r = residue_formula_residual(group, lambda z: holo.eval(z)[0], [])
    results["holomorphic"] = r
    worst = max(worst, r)
    b = (1, 1)
    r = residue_formula_residual(group, lambda z: omega.eval_string(b, z), [w])
    results["omega_bb"] = r
    worst = max(worst, r)

    def psi3_form(z):
        vals, _ = psi.psi3(np.asarray(z), w, wp)
        return vals[()]

    r = residue_formula_residual(group, psi3_form, [w, wp])
    results["psi3"] = r
    worst = max(worst, r)
    budget = omega.fit_residual + 1e-8
    return _report("residue_formula", worst, budget, cases=results)


def check_period_matrix(group, L, n_per_seg=64):
    holo = HolomorphicBasis(group, L)
    tau = period_matrix(group, holo, n_per_seg=n_per_seg)
    sym = float(np.max(np.abs(tau - tau.T)))
    rep = _report("period_matrix_symmetry", sym, 1e-8,
                  tau=[[complex(x) for x in row] for row in tau])
    if group.g == 1:
        # classical oracle: with the I_A-normalized differential and the
        # b-path z0 -> gamma^{-1}(z0), the cross-ratio law gives log q exactly
        want = np.log(group.qs[0])
        rep["g1_oracle_residual"] = float(abs(tau[0, 0] - want))
        rep["ok"] = rep["ok"] and rep["g1_oracle_residual"] < 1e-8
    return rep


def forms_suite(g, L=None, degree=3, seed=0, safety=10.0):
    """Run the whole forms battery on the default genus-g instance."""
    group = default_group(g)
    if L is None:
        L = 8 if g == 1 else 6
    w = 0.25 - 0.35j
    wp = -0.3 - 0.4j
    omega = OmegaFamily(group, L, degree, w)
    reports = [
        check_psi_symmetry(group, L, degree, seed=seed),
        check_psi_automorphy(group, L, degree, seed=seed + 1),
        check_psi_aperiod(group, L, degree, seed=seed + 2),
        check_omega_aperiod(omega),
        check_omega_residue(omega),
        check_omega_jump(omega),
        check_w_difference(group, L, degree, w, wp, seed=seed + 3),
        check_lemma4a(group, L, degree, w, wp, seed=seed + 4),
        check_gamma_w(group, L, degree, w, seed=seed + 5),
        check_psi3_additivity(group, L, degree, seed=seed + 6),
        check_psi3_quadrature(group, L, min(degree, 2), seed=seed + 7),
        check_psi3_wprime_automorphy(group, L, max(degree - 2, 1), w, seed=seed + 8),
        check_residue_formula(group, L, degree, w, seed=seed + 9),
        check_period_matrix(group, L),
    ]
    return reports


def doubling_check(g, check, L_base=None, degree=2, **kw):
    """Run a named check at L and 2L; the residual must not grow past floor."""
    group = default_group(g)
    if L_base is None:
        L_base = 4 if g == 1 else 3
    r1 = check(group, L_base, degree, **kw)
    r2 = check(group, 2 * L_base, degree, **kw)
    floor = 1e-10 * max(1.0, abs(r1["residual"]))
    ok = r2["residual"] < max(r1["residual"], floor) + 1e-10
    return {"check": "doubling_" + r1["check"], "L": L_base,
            "residual_L": r1["residual"], "residual_2L": r2["residual"],
            "ok": bool(ok)}


def doubling_suite(g, L_base=None, degree=2, seed=0):
    """Truncation honesty: doubling L shrinks every forms residual, or the
    residual already sits under the roundoff floor (1e-10 relative)."""
    group = default_group(g)
    if L_base is None:
        L_base = 4 if g == 1 else 3
    w = 0.25 - 0.35j
    out = []

    def compare(fn, name):
        r1 = fn(L_base)["residual"]
        r2 = fn(2 * L_base)["residual"]
        floor = 1e-10 * max(1.0, r1)
        out.append({"check": "doubling_" + name, "L": L_base,
                    "residual_L": r1, "residual_2L": r2,
                    "ok": bool(r2 < max(r1, floor) + floor)})

    compare(lambda L: check_psi_symmetry(group, L, degree, seed=seed),
            "psi_symmetry")
    compare(lambda L: check_psi_automorphy(group, L, degree, seed=seed + 1),
            "psi_automorphy")
    compare(lambda L: check_psi_aperiod(group, L, degree, seed=seed + 2),
            "psi_aperiod")
    compare(lambda L: check_omega_aperiod(OmegaFamily(group, L, degree, w)),
            "omega_aperiod")
    compare(lambda L: check_omega_residue(OmegaFamily(group, L, degree, w)),
            "omega_residue")
    compare(lambda L: check_omega_jump(OmegaFamily(group, L, degree, w)),
            "omega_automorphy")
    compare(lambda L: check_gamma_w(group, L, degree, w, seed=seed + 5),
            "gamma_w")
    compare(lambda L: check_residue_formula(group, L, degree, w, seed=seed + 9),
            "residue_formula")
    return out

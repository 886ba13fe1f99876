"""Acceptance criteria, one test per numbered criterion.

Each test prints a PASS/FAIL line; tolerances are the per-check budgets with
safety factor 10 for numeric suites and exact zero for the algebraic ones.
Run with `pytest tests/test_acceptance.py -v -s`.
"""

import json
import random
import re
import time
from fractions import Fraction

import pytest


def _line(num, name, ok, detail=""):
    print("ACCEPTANCE %d (%s): %s %s" % (num, name, "PASS" if ok else "FAIL", detail))
    assert ok, "criterion %d (%s) failed: %s" % (num, name, detail)


def test_criterion_1_algebra_exact():
    from surfacekz.tgn import (GradedQuotient, SimplicialMap, check_coproduct,
                               check_derived_relations, check_semidirect)
    failures = []
    times = {}
    for g in (1, 2):
        for n in (2, 3, 4):
            t0 = time.time()
            q = GradedQuotient(g, n, 2, 2)
            reps = [check_derived_relations(q), check_semidirect(q),
                    SimplicialMap(q).check_well_defined(),
                    check_coproduct(q, 1, 1), check_coproduct(q, 1, 2)]
            # pure-x slices up to total degree 4 against the Witt oracle
            qx = GradedQuotient(g, n, 4, 1)
            reps.append(check_semidirect(qx, pmax=4))
            times[(g, n)] = time.time() - t0
            for r in reps:
                if not r["ok"]:
                    failures.append((g, n, r["check"]))
    slow = {k: round(v, 1) for k, v in times.items() if v > 120}
    _line(1, "algebra suite", not failures and not slow,
          "failures=%s slow=%s times=%s" % (failures, slow,
                                            {k: round(v, 1) for k, v in times.items()}))


def test_criterion_2_modules_exact():
    from surfacekz.fmod import (TensorModule, check_exact_sequences,
                                check_gr_decomposition, check_prop_alg,
                                check_property_P, module_M_i, module_M_ij,
                                module_M_ijk)
    failures = []
    for g in (1, 2):
        for n in (2, 3, 4):
            if not check_exact_sequences(g, n, 3)["ok"]:
                failures.append(("exact_seq", g, n))
            if not check_gr_decomposition(g, n, 2)["ok"]:
                failures.append(("gr", g, n))
    for g in (1, 2):
        mij = module_M_ij(g, 2, 1, 2)
        mijk = module_M_ijk(g, 3, 1, 2, 3)
        tens = TensorModule(module_M_i(g, 2, 1), module_M_ij(g, 2, 1, 2))
        for d in (0, 1, 2):
            if not check_property_P(mij, 1, 2, d)["ok"]:
                failures.append(("P_Mij", g, d))
            if not check_property_P(mijk, 1, 2, d)["ok"]:
                failures.append(("P_Mijk", g, d))
            if not check_property_P(tens, 1, 2, d)["ok"]:
                failures.append(("P_tensor", g, d))
    for g, n in ((1, 2), (1, 3), (2, 2)):
        for d in (0, 1):
            rep = check_prop_alg(g, n, 1, 2, d)
            if not rep["ok"]:
                failures.append(("prop_alg", g, n, d))
    _line(2, "module suite", not failures, str(failures))


def test_criterion_3_f_symmetry():
    from surfacekz.schottky import f_coeff
    rng = random.Random(2024)
    bad = 0
    checked = 0
    while checked < 1000:
        length = rng.randint(0, 6)
        letters = []
        while len(letters) < length:
            l = rng.choice([1, 2, -1, -2])
            if letters and letters[-1] == -l:
                continue
            letters.append(l)
        s = rng.randint(0, 3)
        idx = tuple(rng.randint(1, 2) for _ in range(s))
        inv = tuple(-l for l in reversed(letters))
        if f_coeff(tuple(reversed(idx)), inv) != (-1) ** s * f_coeff(idx, tuple(letters)):
            bad += 1
        checked += 1
    _line(3, "f-coefficient symmetry", bad == 0, "%d/%d failures" % (bad, checked))


def test_criterion_4_forms():
    from surfacekz.forms import doubling_suite, forms_suite
    failures = []
    for g in (1, 2):
        for r in forms_suite(g):
            if not r["ok"]:
                failures.append((g, r["check"], r.get("residual")))
        for r in doubling_suite(g):
            if not r["ok"]:
                failures.append((g, r["check"], r.get("residual_2L")))
    _line(4, "forms suite", not failures, str(failures))


def test_criterion_5_flatness():
    from surfacekz.connection import (ConnectionContext, check_closedness,
                                      check_commutation, default_points)
    t0 = time.time()
    failures = []
    tuples_run = 0
    for g in (1, 2):
        for n in (2, 3):
            ctx = ConnectionContext(g, n, pmax=2, qmax=2)
            for k in range(3):
                pts = default_points(ctx, seed=100 * g + 10 * n + k)
                tuples_run += 1
                for i in range(1, n + 1):
                    for j in range(i + 1, n + 1):
                        r1 = check_closedness(ctx, pts, i, j)
                        r2 = check_commutation(ctx, pts, i, j)
                        if not r1["ok"]:
                            failures.append(("closed", g, n, k, i, j, r1["residual"]))
                        if not r2["ok"]:
                            failures.append(("comm", g, n, k, i, j, r2["residual"]))
    elapsed = time.time() - t0
    _line(5, "flatness suite", not failures and tuples_run >= 10 and elapsed < 600,
          "tuples=%d elapsed=%.0fs failures=%s" % (tuples_run, elapsed, failures))


def test_criterion_6_simplicial():
    from surfacekz.connection import (ConnectionContext, check_gauge_identity,
                                      check_simplicial)
    failures = []
    ctx1 = ConnectionContext(1, 1)
    ctx2 = ConnectionContext(1, 2)
    ctx3 = ConnectionContext(1, 3)
    for small, big, zpts in ((ctx1, ctx2, [0.1 - 0.22j]),
                             (ctx2, ctx3, [0.1 - 0.22j, 0.35 + 0.1j])):
        r1 = check_simplicial(big, small, zpts)
        r2 = check_gauge_identity(big, small, zpts)
        if not r1["ok"]:
            failures.append(("two_sided", big.n, r1["residual"]))
        if not r2["ok"]:
            failures.append(("gauge", big.n, r2["residual"]))
    _line(6, "simplicial suite", not failures, str(failures))


def test_criterion_7_holonomy():
    from surfacekz.holonomy import holonomy_suite
    failures = []
    needed = ("braid_braid", "braid_X1_sigma", "braid_Y1_sigma", "braid_X1_Y1",
              "braid_surface", "rho_X_expansion", "rho_Y_expansion")
    for n in (2, 3):
        reports = holonomy_suite(1, n, N=2)
        seen = set()
        for r in reports:
            for tag in needed:
                if r["check"].startswith(tag):
                    seen.add(tag)
            if not r["ok"]:
                failures.append((n, r["check"], r.get("residual")))
            if "perm_identity" in r and not r["perm_identity"]:
                failures.append((n, r["check"], "permutation"))
        missing = [t for t in needed if t not in seen and
                   not (n == 2 and "sigma" in t or n == 2 and t == "braid_braid")]
        if missing:
            failures.append((n, "missing", missing))
    _line(7, "holonomy suite", not failures, str(failures))


def test_criterion_8_reproducibility(tmp_path):
    from surfacekz.cli import main
    args = ["run", "--suite", "algebra", "--g", "1", "--n", "3",
            "--seed", "11", "--no-figures"]
    outs = []
    for sub in ("r1", "r2"):
        out = tmp_path / sub
        code = main(args + ["--out", str(out)])
        assert code == 0
        text = (out / "report_algebra.jsonl").read_text()
        outs.append(re.sub(r'"timestamp": "[^"]*"', '', text))
    identical = outs[0] == outs[1]
    # exit-code contract: invalid bounds exit with a usage error
    usage_ok = False
    try:
        main(["run", "--suite", "algebra", "--pmax", "0"])
    except SystemExit as e:
        usage_ok = e.code == 2
    _line(8, "reproducibility", identical and usage_ok,
          "identical=%s usage_exit=%s" % (identical, usage_ok))

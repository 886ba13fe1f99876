"""Batch front end: named check suites with machine-readable reports.

    surfacekz run --suite flatness --g 1 --n 2 --out reports/
    surfacekz dims --g 2 --n 3

Each run writes an append-only JSON-lines report (one object per sub-check
plus one summary object), delimited dimension tables where applicable, and
PNG figures next to the outputs unless --no-figures is given.  Exit code 0
means every sub-check passed, 1 reports failures, 2 is a usage error.
The worker pool fanning out sub-checks is capped by SURFACE_KZ_THREADS.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass, field
from pathlib import Path

SUITES = ("algebra", "modules", "forms", "flatness", "simplicial", "holonomy", "all")


@dataclass
class RunConfig:
    g: int = 1
    n: int = 2
    pmax: int = 2
    qmax: int = 2
    L: int = 0              # 0: per-genus default (8 for g=1, 6 for g=2)
    quad_nodes: int = 32
    steps: int = 8          # transport panels per segment
    N: int = 2              # holonomy truncation degree
    tol: float = 0.0        # 0: use per-check budgets; else absolute threshold
    safety: float = 10.0
    seed: int = 0
    suite: str = "all"
    out: str = "reports"
    figures: bool = True
    flatness_tuples: int = 3
    alphas: list = field(default_factory=list)
    betas: list = field(default_factory=list)
    qs: list = field(default_factory=list)

    @classmethod
    def load(cls, path, overrides):
        data = {}
        if path:
            with open(path) as f:
                data = json.load(f)
        cfg = cls(**{k: v for k, v in data.items() if k in cls.__dataclass_fields__})
        for key, val in overrides.items():
            if val is not None:
                setattr(cfg, key, val)
        cfg.validate()
        return cfg

    def validate(self):
        if self.g < 1 or self.n < 0:
            raise SystemExit(2)
        if self.pmax < 1 or self.qmax < 1 or self.N < 1 or self.steps < 1:
            print("error: bounds must be positive", file=sys.stderr)
            raise SystemExit(2)
        if self.suite not in SUITES:
            print("error: unknown suite %r" % self.suite, file=sys.stderr)
            raise SystemExit(2)

    @property
    def word_cutoff(self):
        if self.L:
            return self.L
        return 8 if self.g == 1 else 6

    def group(self):
        from .schottky import SchottkyGroup, default_group
        if self.alphas:
            return SchottkyGroup(
                [complex(a[0], a[1]) if isinstance(a, (list, tuple)) else complex(a)
                 for a in self.alphas],
                [complex(b[0], b[1]) if isinstance(b, (list, tuple)) else complex(b)
                 for b in self.betas],
                [complex(q[0], q[1]) if isinstance(q, (list, tuple)) else complex(q)
                 for q in self.qs])
        return default_group(self.g)


def _pool():
    cap = os.environ.get("SURFACE_KZ_THREADS")
    workers = max(1, int(cap)) if cap else min(4, os.cpu_count() or 1)
    return ThreadPoolExecutor(max_workers=workers)


def _fan_out(tasks):
    """Run (name, callable) pairs on the pool; deterministic result order."""
    results = {}
    with _pool() as pool:
        futures = {pool.submit(fn): name for name, fn in tasks}
        for fut, name in futures.items():
            results[name] = fut.result()
    out = []
    for name, _ in tasks:
        rep = results[name]
        out.extend(rep if isinstance(rep, list) else [rep])
    return out


def _apply_tol(reports, cfg):
    if not cfg.tol:
        return reports
    for r in reports:
        if "residual" in r:
            r["ok"] = bool(r["residual"] < cfg.tol)
    return reports


# -- suites ----------------------------------------------------------------

def run_algebra(cfg):
    from .tgn import (GradedQuotient, SimplicialMap, check_coproduct,
                      check_derived_relations, check_semidirect)
    q = GradedQuotient(cfg.g, cfg.n, cfg.pmax, cfg.qmax)
    tasks = [
        ("derived", lambda: check_derived_relations(q)),
        ("semidirect", lambda: check_semidirect(q)),
    ]
    if cfg.n >= 2:
        tasks.append(("simplicial_map",
                      lambda: SimplicialMap(q).check_well_defined()))
        tasks.append(("coproduct_k1", lambda: check_coproduct(q, 1, 1)))
        tasks.append(("coproduct_k2", lambda: check_coproduct(q, 1, 2)))
    reports = _fan_out(tasks)
    table = q.hilbert_table()
    reports.append({"check": "hilbert_table", "ok": True,
                    "dims": {"%d,%d" % k: v for k, v in sorted(table.items())}})
    return reports, q


def run_modules(cfg):
    from .fmod import (TensorModule, check_exact_sequences,
                       check_gr_decomposition, check_m12_identification,
                       check_prop_alg, check_property_P, module_M_i,
                       module_M_ij, module_M_ijk)
    g, n = cfg.g, cfg.n
    tasks = [
        ("exact_sequences", lambda: check_exact_sequences(g, n, 3)),
        ("gr_decomposition", lambda: check_gr_decomposition(g, n, 2)),
        ("m12_identification", lambda: check_m12_identification(g, 3)),
    ]
    if n >= 2:
        mod = module_M_ij(g, n, 1, 2)
        for d in range(3):
            tasks.append(("P_M12_d%d" % d,
                          lambda m=mod, dd=d: check_property_P(m, 1, 2, dd)))
        tens = TensorModule(module_M_i(g, n, 1), module_M_ij(g, n, 1, 2))
        tasks.append(("P_tensor", lambda: check_property_P(tens, 1, 2, 1)))
        tasks.append(("prop_alg_d0", lambda: check_prop_alg(g, n, 1, 2, 0)))
        tasks.append(("prop_alg_d1", lambda: check_prop_alg(g, n, 1, 2, 1)))
    if n >= 3:
        m3 = module_M_ijk(g, n, 1, 2, 3)
        tasks.append(("P_M123", lambda: check_property_P(m3, 1, 2, 1)))
    return _fan_out(tasks)


def run_forms(cfg):
    from .forms import forms_suite
    return forms_suite(cfg.g, L=cfg.L or None, seed=cfg.seed, safety=cfg.safety)


def run_flatness(cfg):
    import numpy as np
    from .connection import (ConnectionContext, check_closedness,
                             check_commutation, default_points)
    ctx = ConnectionContext(cfg.g, cfg.n, pmax=cfg.pmax, qmax=cfg.qmax,
                            L=cfg.L or None)
    reports = []
    for k in range(cfg.flatness_tuples):
        pts = default_points(ctx, seed=cfg.seed + 17 * k)
        for i in range(1, cfg.n + 1):
            for j in range(i + 1, cfg.n + 1):
                rep = check_closedness(ctx, pts, i, j)
                rep["tuple"] = k
                reports.append(rep)
                rep = check_commutation(ctx, pts, i, j)
                rep["tuple"] = k
                reports.append(rep)
    return reports


def run_simplicial(cfg):
    from .connection import (ConnectionContext, check_gauge_identity,
                             check_simplicial, default_points)
    if cfg.n < 2:
        return [{"check": "simplicial", "ok": True, "skipped": "needs n >= 2"}]
    ctx_n = ConnectionContext(cfg.g, cfg.n, L=cfg.L or None)
    ctx_small = ConnectionContext(cfg.g, cfg.n - 1, L=cfg.L or None)
    pts = default_points(ctx_small, seed=cfg.seed) if cfg.n > 2 else \
        default_points(ctx_small, seed=cfg.seed)[:1]
    return [check_simplicial(ctx_n, ctx_small, pts),
            check_gauge_identity(ctx_n, ctx_small, pts)]


def run_holonomy(cfg):
    from .holonomy import holonomy_suite
    return holonomy_suite(cfg.g, cfg.n, N=cfg.N, L=cfg.L or None, seed=cfg.seed)


def cmd_run(cfg):
    from .reports import fig_dims_heatmap, fig_residuals, summarize, write_reports
    outdir = Path(cfg.out)
    reports = []
    quotient = None
    chosen = SUITES[:-1] if cfg.suite == "all" else (cfg.suite,)
    for suite in chosen:
        if suite == "algebra":
            reps, quotient = run_algebra(cfg)
        elif suite == "modules":
            reps = run_modules(cfg)
        elif suite == "forms":
            reps = run_forms(cfg)
        elif suite == "flatness":
            reps = run_flatness(cfg)
        elif suite == "simplicial":
            reps = run_simplicial(cfg)
        elif suite == "holonomy":
            reps = run_holonomy(cfg)
        else:
            continue
        for r in reps:
            r["suite"] = suite
        reports.extend(_apply_tol(reps, cfg))
    config_echo = asdict(cfg)
    config_echo.pop("out", None)  # not part of the reproducible content
    summary = summarize(reports, config=config_echo)
    path = write_reports(outdir / ("report_%s.jsonl" % cfg.suite), reports, summary)
    print("report: %s" % path)
    if cfg.figures:
        fig = fig_residuals(reports, outdir / ("residuals_%s.png" % cfg.suite),
                            title="suite %s (g=%d, n=%d)" % (cfg.suite, cfg.g, cfg.n))
        if fig:
            print("figure: %s" % fig)
        if quotient is not None:
            fig = fig_dims_heatmap(quotient.hilbert_table(), cfg.g, cfg.n,
                                   outdir / "dims_heatmap.png")
            print("figure: %s" % fig)
    failed = [r["check"] for r in reports if not r.get("ok", False)]
    if failed:
        print("FAILED: %s" % ", ".join(failed), file=sys.stderr)
        return 1
    print("all %d checks passed" % len(reports))
    return 0


def cmd_dims(cfg):
    from .fmod import graded_dims, module_M_i, module_M_ij, module_V
    from .reports import fig_dims_heatmap, sanitize, write_dims_csv
    from .tgn import GradedQuotient
    outdir = Path(cfg.out)
    q = GradedQuotient(cfg.g, cfg.n, cfg.pmax, cfg.qmax)
    table = q.hilbert_table()
    csv_path = write_dims_csv(outdir / "dims.csv", table, cfg.g, cfg.n)
    payload = q.dump()
    if cfg.n >= 1:
        payload["module_dims"] = {
            "M": graded_dims(module_M_i(cfg.g, max(cfg.n, 1), 1), 3),
        }
        if cfg.n >= 2:
            payload["module_dims"]["M12"] = graded_dims(
                module_M_ij(cfg.g, cfg.n, 1, 2), 3)
            payload["module_dims"]["V"] = graded_dims(module_V(cfg.g, cfg.n), 3)
    json_path = outdir / "dims.json"
    json_path.parent.mkdir(parents=True, exist_ok=True)
    json_path.write_text(json.dumps(sanitize(payload), sort_keys=True, indent=1))
    print("tables: %s %s" % (csv_path, json_path))
    if cfg.figures:
        fig = fig_dims_heatmap(table, cfg.g, cfg.n, outdir / "dims_heatmap.png")
        print("figure: %s" % fig)
    return 0


def main(argv=None):
    parser = argparse.ArgumentParser(
        prog="surfacekz",
        description="verification suites for the flat connection on "
                    "configuration spaces of a Schottky curve")
    sub = parser.add_subparsers(dest="command", required=True)
    for name in ("run", "dims"):
        p = sub.add_parser(name)
        p.add_argument("--config", help="JSON config file")
        p.add_argument("--g", type=int)
        p.add_argument("--n", type=int)
        p.add_argument("--pmax", type=int)
        p.add_argument("--qmax", type=int)
        p.add_argument("--L", type=int)
        p.add_argument("--N", type=int)
        p.add_argument("--steps", type=int)
        p.add_argument("--tol", type=float)
        p.add_argument("--seed", type=int)
        p.add_argument("--out")
        p.add_argument("--figures", dest="figures", action="store_true",
                       default=None)
        p.add_argument("--no-figures", dest="figures", action="store_false")
        if name == "run":
            p.add_argument("--suite", choices=SUITES)
            p.add_argument("--flatness-tuples", dest="flatness_tuples", type=int)
    args = parser.parse_args(argv)
    overrides = {k: getattr(args, k, None) for k in RunConfig.__dataclass_fields__}
    cfg = RunConfig.load(args.config, overrides)
    if args.command == "run":
        return cmd_run(cfg)
    return cmd_dims(cfg)


if __name__ == "__main__":
    sys.exit(main())

"""Experiment harness: counting checks, recoveries, rate sweeps, width tables.

JSON config in, CSV/JSON out.  Output files start with ``#``-prefixed JSON
metadata lines (artifact version, resolved config, generator identity) so
they are self-describing, diffable and byte-reproducible for identical
configs and seeds.  A wall-clock stamp line is opt-in (``--stamp``) because
it would break byte-level reproducibility.

Exit codes: 0 success, 2 validation error, 3 size cap exceeded, 4 solver
non-convergence under ``--strict``.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
import time
from concurrent.futures import ProcessPoolExecutor

import numpy as np

from . import __version__
from .indexsets import (
    AnisotropyMixed,
    AnisotropySum,
    CapExceededError,
    count_mixed,
    count_sum,
    hyperbolic_cross_size,
    mixed_sublevel,
    sum_sublevel,
)
from .recovery import RecoveryConfig, m_tilde, plan, run_recovery, theoretical_rate
from .rng import PRNG_IDENTITY
from .sensing import draw_uniform_samples
from .sobolev import (
    SmoothnessClass,
    evaluate_grid,
    generate_extremal,
    generate_sparse,
    l2_error,
    sobolev_norm,
)
from .srlasso import SolverConfig
from .widths import weight_spectrum, width_rate, width_sandwich

EXIT_OK = 0
EXIT_VALIDATION = 2
EXIT_CAP = 3
EXIT_NONCONVERGED = 4

# function seeds are offset from sample seeds so the two streams never collide
FUNCTION_SEED_OFFSET = 1_000_003


class ValidationError(ValueError):
    pass


def parse_class(text: str) -> SmoothnessClass:
    """Parse ``mixed:1,2`` / ``sum:2,2`` into a smoothness class."""
    try:
        kind, params = text.split(":", 1)
        values = tuple(float(v) for v in params.split(","))
    except ValueError as exc:
        raise ValidationError(f"bad class spec {text!r}") from exc
    if kind == "mixed":
        return AnisotropyMixed(values)
    if kind == "sum":
        return AnisotropySum(values)
    raise ValidationError(f"unknown class kind {kind!r} in {text!r}")


def class_label(cls: SmoothnessClass) -> str:
    if isinstance(cls, AnisotropyMixed):
        return "mixed:" + ",".join(_fmt(v) for v in cls.alpha)
    return "sum:" + ",".join(_fmt(v) for v in cls.beta)


def _fmt(v: float) -> str:
    return repr(int(v)) if float(v).is_integer() else repr(v)


def _metadata_lines(command: str, config: dict, stamp: bool) -> list[str]:
    meta = {
        "artifact": f"anisorec {__version__}",
        "command": command,
        "config": config,
        "prng": PRNG_IDENTITY,
    }
    lines = ["# " + json.dumps(meta, sort_keys=True)]
    if stamp:
        lines.append("# " + json.dumps({"wall_clock_utc": time.strftime("%Y-%m-%dT%H:%M:%SZ", time.gmtime())}))
    return lines


def _write_table(path, command: str, config: dict, header: list[str], rows, stamp: bool):
    lines = _metadata_lines(command, config, stamp)
    lines.append(",".join(header))
    for row in rows:
        lines.append(",".join(_cell(v) for v in row))
    text = "\n".join(lines) + "\n"
    if path is None:
        sys.stdout.write(text)
    else:
        with open(path, "w", newline="") as fh:
            fh.write(text)


def _cell(v) -> str:
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, float):
        return repr(v)
    return str(v)


def _recovery_config(cfg: dict) -> RecoveryConfig:
    solver = cfg.get("solver", {})
    return RecoveryConfig(
        epsilon=float(cfg.get("epsilon", 0.5)),
        u=cfg.get("u", "loglog"),
        c_prime=float(cfg.get("c_prime", 1.0)),
        max_index_set_size=int(cfg.get("cap", 20000)),
        solver=SolverConfig(
            max_iters=int(solver.get("max_iters", 5000)),
            tol=float(solver.get("tol", 1e-9)),
            step_scale=float(solver.get("step_scale", 0.9)),
        ),
    )


def _function_support(cls: SmoothnessClass, spec: dict):
    """Support set for a test function: smallest sublevel with the target size."""
    target = int(spec.get("support_size", 500))
    cap = int(spec.get("support_cap", max(16 * target, 4096)))
    limit = 2.0
    build = mixed_sublevel if isinstance(cls, AnisotropyMixed) else sum_sublevel
    while len(build(limit, cls, max_size=cap)) < target:
        limit *= 2.0
    lo, hi = limit / 2.0, limit
    for _ in range(40):
        mid = (lo + hi) / 2.0
        if len(build(mid, cls, max_size=cap)) < target:
            lo = mid
        else:
            hi = mid
    return build(hi, cls, max_size=cap)


def _make_function(cls: SmoothnessClass, spec: dict, seed: int):
    support = _function_support(cls, spec)
    kind = spec.get("kind", "extremal")
    if kind == "extremal":
        return generate_extremal(
            cls, support, float(spec.get("decay_margin", 0.5)), seed=seed
        )
    if kind == "sparse":
        return generate_sparse(support, int(spec.get("s", 1)), seed=seed)
    raise ValidationError(f"unknown function kind {kind!r}")


# ---------------------------------------------------------------------------
# count
# ---------------------------------------------------------------------------


def cmd_count(args) -> int:
    if args.d is None:
        raise ValidationError("count requires --d")
    d = args.d
    r = args.r
    rows = []
    if args.hc:
        size = hyperbolic_cross_size(d, r)
        bound = r * (1.0 + math.log(r)) ** (d - 1) if r >= 1 else 0.0
        rows.append(("hc", d, r, size, bound, size / bound if bound else float("nan")))
    if args.mixed:
        cls = AnisotropyMixed(tuple(float(v) for v in args.mixed.split(",")))
        count = count_mixed(d, r, cls, positive_only=args.positive_only)
        h, p = cls.min_exponent, cls.min_multiplicity
        predicted = r ** (1.0 / h) * math.log(r) ** (p - 1) if r > 1 else float("nan")
        rows.append(("mixed", d, r, count, predicted, count / predicted))
    if args.sum:
        cls = AnisotropySum(tuple(float(v) for v in args.sum.split(",")))
        count = count_sum(d, r, cls)
        predicted = r ** (1.0 / cls.harmonic_exponent) if r > 0 else float("nan")
        rows.append(("sum", d, r, count, predicted, count / predicted))
    if not rows:
        raise ValidationError("choose at least one of --hc, --mixed, --sum")
    config = {
        "d": d,
        "r": r,
        "hc": args.hc,
        "mixed": args.mixed,
        "sum": args.sum,
        "positive_only": args.positive_only,
    }
    _write_table(
        args.out,
        "count",
        config,
        ["family", "d", "r", "count", "predicted", "ratio"],
        rows,
        args.stamp,
    )
    return EXIT_OK


# ---------------------------------------------------------------------------
# recover
# ---------------------------------------------------------------------------


def cmd_recover(args) -> int:
    cfg = _load_config(args)
    required = {"d", "m", "seed", "class"}
    missing = required - cfg.keys()
    if missing:
        raise ValidationError(f"recover config missing keys: {sorted(missing)}")
    d = int(cfg["d"])
    m = int(cfg["m"])
    seed = int(cfg["seed"])
    cls = parse_class(cfg["class"])
    rcfg = _recovery_config(cfg)
    recovery_plan = plan(m, d, rcfg)
    f = _make_function(cls, cfg.get("function", {}), seed + FUNCTION_SEED_OFFSET)
    samples = draw_uniform_samples(m, d, seed)
    values = evaluate_grid(f, samples.points)
    result = run_recovery(samples, values, recovery_plan, rcfg)
    err = l2_error(f, result.f_sharp)
    mt = recovery_plan.m_tilde
    rate = theoretical_rate(mt, cls) if mt >= 2.0 else float("nan")
    report = {
        "artifact": f"anisorec {__version__}",
        "command": "recover",
        "config": cfg,
        "prng": PRNG_IDENTITY,
        "plan": json.loads(recovery_plan.to_json()),
        "class": class_label(cls),
        "sobolev_norm": sobolev_norm(f, cls),
        "l2_error": err,
        "theoretical_rate": rate,
        "ratio": err / rate if rate == rate else float("nan"),
        "solver_iters": result.solver.iters_used,
        "solver_converged": result.solver.converged,
    }
    if args.stamp:
        report["wall_clock_utc"] = time.strftime("%Y-%m-%dT%H:%M:%SZ", time.gmtime())
    # index list is bulky and already determined by (d, r); drop it from reports
    report["plan"].pop("indices", None)
    text = json.dumps(report, sort_keys=True, indent=2, allow_nan=True) + "\n"
    if args.out is None:
        sys.stdout.write(text)
    else:
        with open(args.out, "w") as fh:
            fh.write(text)
    if args.strict and not result.solver.converged:
        return EXIT_NONCONVERGED
    return EXIT_OK


# ---------------------------------------------------------------------------
# rate sweep
# ---------------------------------------------------------------------------


def _sweep_cell(task):
    """One (class, m, seed) cell; module-level so worker pools can pickle it."""
    cfg, label, m, seed = task
    cls = parse_class(label)
    rcfg = _recovery_config(cfg)
    recovery_plan = plan(m, int(cfg["d"]), rcfg)
    f = _make_function(cls, cfg.get("function", {}), seed + FUNCTION_SEED_OFFSET)
    samples = draw_uniform_samples(m, int(cfg["d"]), seed)
    values = evaluate_grid(f, samples.points)
    result = run_recovery(samples, values, recovery_plan, rcfg)
    err = l2_error(f, result.f_sharp)
    mt = recovery_plan.m_tilde
    rate = theoretical_rate(mt, cls) if mt >= 2.0 else float("nan")
    return {
        "m": m,
        "m_tilde": mt,
        "s": recovery_plan.s,
        "r": recovery_plan.r,
        "N": recovery_plan.n_modes,
        "capped": recovery_plan.capped,
        "class": label,
        "seed": seed,
        "l2_error": err,
        "theoretical_rate": rate,
        "ratio": err / rate if rate == rate else float("nan"),
        "converged": result.solver.converged,
    }


def run_rate_sweep(cfg: dict, workers: int = 1) -> tuple[list[dict], list[dict]]:
    """Run the grid and return (cell rows, per-class summary rows)."""
    for key in ("d", "classes", "m_grid", "seeds"):
        if key not in cfg:
            raise ValidationError(f"rate-sweep config missing {key!r}")
    m_grid = [int(m) for m in cfg["m_grid"]]
    seeds = [int(s) for s in cfg["seeds"]]
    labels = list(cfg["classes"])
    if not m_grid or not seeds or not labels:
        raise ValidationError("m_grid, seeds and classes must be non-empty")
    for label in labels:
        parse_class(label)
    tasks = [(cfg, label, m, seed) for label in labels for m in m_grid for seed in seeds]
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(_sweep_cell, tasks))
    else:
        results = [_sweep_cell(t) for t in tasks]
    by_key = {(row["class"], row["m"], row["seed"]): row for row in results}
    rows = [by_key[(label, m, seed)] for label in labels for m in m_grid for seed in seeds]

    summaries = []
    for label in labels:
        log_mt, log_err, ratios = [], [], []
        medians = []
        for m in m_grid:
            errs = [by_key[(label, m, seed)]["l2_error"] for seed in seeds]
            med = float(np.median(errs))
            medians.append(med)
            mt = by_key[(label, m, seeds[0])]["m_tilde"]
            log_mt.append(math.log(mt))
            log_err.append(math.log(med))
            ratios.extend(
                by_key[(label, m, seed)]["ratio"]
                for seed in seeds
                if by_key[(label, m, seed)]["ratio"] == by_key[(label, m, seed)]["ratio"]
            )
        slope = float(np.polyfit(log_mt, log_err, 1)[0]) if len(m_grid) > 1 else float("nan")
        inversions = sum(1 for a, b in zip(medians, medians[1:]) if b > a)
        summaries.append(
            {
                "class": label,
                "slope": slope,
                "mean_ratio": float(np.mean(ratios)) if ratios else float("nan"),
                "median_errors": medians,
                "inversions": inversions,
            }
        )
    return rows, summaries


def cmd_rate_sweep(args) -> int:
    cfg = _load_config(args)
    rows, summaries = run_rate_sweep(cfg, workers=args.workers)
    header = [
        "m",
        "m_tilde",
        "s",
        "r",
        "N",
        "capped",
        "class",
        "seed",
        "l2_error",
        "theoretical_rate",
        "ratio",
        "converged",
    ]
    table = [[row[h] for h in header] for row in rows]
    for summary in summaries:
        table.append(
            [
                "slope",
                summary["slope"],
                "",
                "",
                "",
                "",
                summary["class"],
                "",
                "",
                "",
                summary["mean_ratio"],
                "",
            ]
        )
    _write_table(args.out, "rate-sweep", cfg, header, table, args.stamp)
    if args.strict and any(not row["converged"] for row in rows):
        return EXIT_NONCONVERGED
    return EXIT_OK


# ---------------------------------------------------------------------------
# widths
# ---------------------------------------------------------------------------


def cmd_widths(args) -> int:
    cfg = _load_config(args)
    if "class" not in cfg or "m_grid" not in cfg:
        raise ValidationError("widths config needs 'class' and 'm_grid'")
    cls = parse_class(cfg["class"])
    m_grid = [int(m) for m in cfg["m_grid"]]
    if not m_grid:
        raise ValidationError("m_grid must be non-empty")
    spectrum = weight_spectrum(cls, 2 * max(m_grid) + 1, enum_cap=int(cfg.get("cap", 2_000_000)))
    rows = []
    for m in m_grid:
        lower, upper = width_sandwich(spectrum, m)
        rate = width_rate(cls, m) if m >= 2 else float("nan")
        rows.append((m, lower, upper, rate))
    _write_table(args.out, "widths", cfg, ["m", "lower", "upper", "rate"], rows, args.stamp)
    return EXIT_OK


# ---------------------------------------------------------------------------
# plumbing
# ---------------------------------------------------------------------------


def _load_config(args) -> dict:
    cfg: dict = {}
    if getattr(args, "config", None):
        with open(args.config) as fh:
            cfg = json.load(fh)
    overrides = {
        "d": getattr(args, "d", None),
        "m_grid": _parse_int_list(getattr(args, "m_grid", None)),
        "seeds": _parse_int_list(getattr(args, "seeds", None)),
        "epsilon": getattr(args, "epsilon", None),
        "u": getattr(args, "u", None),
        "c_prime": getattr(args, "c_prime", None),
        "cap": getattr(args, "cap", None),
        "class": getattr(args, "cls", None),
    }
    for key, value in overrides.items():
        if value is not None:
            cfg[key] = value
    return cfg


def _parse_int_list(text):
    if text is None:
        return None
    return [int(v) for v in str(text).split(",") if v != ""]


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="anisorec", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--config", help="JSON config file; flags override its values")
        p.add_argument("--out", help="output path (stdout when omitted)")
        p.add_argument("--stamp", action="store_true", help="embed a wall-clock line")
        p.add_argument("--strict", action="store_true", help="exit 4 on solver non-convergence")
        p.add_argument("--d", type=int)
        p.add_argument("--m-grid", dest="m_grid")
        p.add_argument("--seeds")
        p.add_argument("--epsilon", type=float)
        p.add_argument("--u", help="loglog | log | const:V")
        p.add_argument("--c-prime", dest="c_prime", type=float)
        p.add_argument("--cap", type=int)
        p.add_argument("--class", dest="cls", help="mixed:a1,a2 | sum:b1,b2")
        p.add_argument("--workers", type=int, default=1)

    p_count = sub.add_parser("count", help="sublevel counting checks")
    common(p_count)
    p_count.add_argument("--r", type=float, required=True)
    p_count.add_argument("--hc", action="store_true")
    p_count.add_argument("--mixed", help="comma-separated exponents")
    p_count.add_argument("--sum", help="comma-separated exponents")
    p_count.add_argument("--positive-only", action="store_true", dest="positive_only")
    p_count.set_defaults(func=cmd_count)

    p_rec = sub.add_parser("recover", help="one seeded end-to-end recovery")
    common(p_rec)
    p_rec.set_defaults(func=cmd_recover)

    p_sweep = sub.add_parser("rate-sweep", help="error-rate sweep over (class, m, seed)")
    common(p_sweep)
    p_sweep.set_defaults(func=cmd_rate_sweep)

    p_w = sub.add_parser("widths", help="width sandwich tables")
    common(p_w)
    p_w.set_defaults(func=cmd_widths)

    return parser


def main(argv=None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except CapExceededError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CAP
    except (ValidationError, ValueError, KeyError, OSError, json.JSONDecodeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION


if __name__ == "__main__":
    sys.exit(main())

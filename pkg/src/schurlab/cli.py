"""``schurlab`` command line: dist, hsp, collision and swaptest.

Every command prints its JSON document on stdout. With ``--out DIR`` it also
writes ``<name>.json`` and/or ``<name>.csv`` plus ``manifest.json``. The data
files embed the manifest minus its timestamp, so reruns with the same
parameters produce byte-identical data files; only ``manifest.json`` carries
the wall-clock time (or ``SOURCE_DATE_EPOCH`` when set).

Exit codes: 0 ok, 2 bad arguments, 3 cap exceeded, 4 invariant or bound
failure. Errors are written to stderr as a JSON object.
"""
from __future__ import annotations

import argparse
import json
import os
import sys
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Optional

import numpy as np

from . import __version__, cache
from .collision import (
    amplified_swap_unitary,
    montecarlo_collision,
    plan_collision_algorithm,
    random_instance,
    swap_fidelity,
)
from .errors import CapExceeded, InvariantViolation
from .groups import (
    character_table,
    fourier_probability_exact,
    hidden_subgroup_state,
    isotypic_projector,
    make_group,
    parse_subgroup,
)
from .sampling import joint_fourier_schur, prob_repeated_irrep, tensor_power, theorem1_bound, weak_schur_dist
from .serialize import SCHEMA_VERSION, atomic_write, csv_text, decimal_string, dumps, rational
from .spectra import (
    bhattacharyya,
    check_amplified_lower_bound,
    check_delta_bounds,
    check_fidelity_lower_bound,
    check_monotonicity,
    delta,
    distinguish_advantage,
    fidelity,
    planch,
    schur,
)
from .young import enumerate_partitions

EXIT_OK, EXIT_USAGE, EXIT_CAP, EXIT_INVARIANT = 0, 2, 3, 4
JOINT_TOL = 1e-9
SWAP_TOL = 1e-9


class UsageError(ValueError):
    pass


@dataclass
class Result:
    name: str
    doc: dict
    header: list
    rows: list
    failures: list = field(default_factory=list)


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        _report_error(EXIT_USAGE, "UsageError", message)
        sys.exit(EXIT_USAGE)


def _report_error(code: int, kind: str, message: str) -> None:
    sys.stderr.write(json.dumps({"error": {"exit_code": code, "message": message, "type": kind}}, sort_keys=True) + "\n")


def _workers() -> int:
    env = os.environ.get("SCHURLAB_THREADS")
    if env:
        try:
            n = int(env)
        except ValueError:
            raise UsageError(f"SCHURLAB_THREADS must be an integer, got {env!r}")
        if n < 1:
            raise UsageError("SCHURLAB_THREADS must be >= 1")
        return n
    return os.cpu_count() or 1


def _bound_doc(report) -> dict:
    return {
        "name": report.name,
        "lhs": report.lhs,
        "rhs": list(report.rhs) if isinstance(report.rhs, tuple) else report.rhs,
        "relation": report.relation,
        "satisfied": report.satisfied,
        "context": report.context,
    }


# dist

def _bound_reports(k: int, d: int, d2: Optional[int], r: Optional[int]) -> list:
    reports = []
    if 2 <= k <= d:
        reports.append(check_delta_bounds(k, d))
        if d <= 40:
            reports.append(check_fidelity_lower_bound(k, d))
    if 2 <= d <= k:
        reports.append(check_amplified_lower_bound(k, d))
    if d2 is not None or r is not None:
        if d2 is None or r is None:
            raise UsageError("monotonicity needs both --d2 and --r")
        reports.append(check_monotonicity(k, d, d2, r))
    return reports


def cmd_dist(args) -> Result:
    if args.sweep:
        return _dist_sweep(args)
    if args.k is None:
        raise UsageError("--k is required (or use --sweep)")
    k, d = args.k, args.d
    compare = args.compare or ("both" if d is not None else "planch")
    want_p = compare in ("planch", "both")
    want_s = compare in ("schur", "both")
    if want_s and d is None:
        raise UsageError(f"--compare {compare} needs --d")
    if args.bounds and d is None:
        raise UsageError("--bounds needs --d")
    p = planch(k) if want_p else None
    s = schur(k, d) if want_s else None

    doc = {"k": k, "d": d, "compare": compare, "rows": []}
    header = ["partition"]
    if want_p:
        header += ["planch_exact", "planch_decimal"]
    if want_s:
        header += ["schur_exact", "schur_decimal"]
    summary = None
    if want_p and want_s:
        dist = delta(k, d)
        bc = bhattacharyya(s, p)
        summary = {
            "delta": dist,
            "total_variation": dist / 2,
            "bhattacharyya": bc,
            "fidelity": fidelity(s, p),
        }
        header += ["delta_exact", "delta_decimal", "bhattacharyya"]
    rows = []
    for lam in enumerate_partitions(k):
        entry = {"partition": lam}
        row = [str(lam)]
        if want_p:
            entry["planch"] = p[lam]
            row += list(rational(p[lam]).values())
        if want_s:
            entry["schur"] = s[lam]
            row += list(rational(s[lam]).values())
        if summary is not None:
            row += list(rational(summary["delta"]).values()) + [decimal_string(summary["bhattacharyya"])]
        doc["rows"].append(entry)
        rows.append(row)
    if summary is not None:
        doc["summary"] = summary
    failures = []
    if args.bounds:
        reports = _bound_reports(k, d, args.d2, args.r)
        doc["bounds"] = [_bound_doc(b) for b in reports]
        failures = [f"{b.name} violated at {b.context}" for b in reports if not b.satisfied]
    elif args.d2 is not None or args.r is not None:
        raise UsageError("--d2/--r are only used with --bounds")
    return Result("dist", doc, header, rows, failures)


def _sweep_task(kd):
    k, d = kd
    p, s = planch(k), schur(k, d)
    row = {"k": k, "d": d, "delta": delta(k, d), "bhattacharyya": bhattacharyya(s, p)}
    checks = {}
    if 2 <= k <= d:
        checks["delta_bounds"] = check_delta_bounds(k, d).satisfied
        if d <= 40:
            checks["fidelity_lower_bound"] = check_fidelity_lower_bound(k, d).satisfied
    if 2 <= d <= k:
        checks["amplified_lower_bound"] = check_amplified_lower_bound(k, d).satisfied
    row["checks"] = checks
    return row


def _dist_sweep(args) -> Result:
    if args.k_max is None or args.d_max is None:
        raise UsageError("--sweep needs --k-max and --d-max")
    if args.k_max < 1 or args.d_max < 1:
        raise UsageError("--k-max and --d-max must be positive")
    tasks = [(k, d) for k in range(1, args.k_max + 1) for d in range(1, args.d_max + 1)]
    schur(args.k_max, 1)  # fail fast on the k cap before spawning anything
    workers = min(_workers(), len(tasks))
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers, initializer=cache.install,
                                 initargs=(cache.default_cache_dir(),)) as pool:
            results = list(pool.map(_sweep_task, tasks, chunksize=max(1, len(tasks) // (4 * workers))))
    else:
        results = [_sweep_task(t) for t in tasks]
    names = ["delta_bounds", "fidelity_lower_bound", "amplified_lower_bound"]
    header = ["k", "d", "delta_exact", "delta_decimal", "bhattacharyya"] + names
    rows = [
        [r["k"], r["d"], *rational(r["delta"]).values(), decimal_string(r["bhattacharyya"])]
        + [("" if n not in r["checks"] else str(r["checks"][n]).lower()) for n in names]
        for r in results
    ]
    failures = [f"{n} violated at k={r['k']}, d={r['d']}" for r in results for n, ok in r["checks"].items() if not ok]
    doc = {"k_max": args.k_max, "d_max": args.d_max, "rows": results}
    return Result("dist_sweep", doc, header, rows, failures)


# hsp

def _hsp_common(group, sub, table, k) -> tuple[dict, list]:
    rep = prob_repeated_irrep(group, sub, k, table)
    applicable = rep.bound <= 1
    ok = rep.exact <= rep.bound or not applicable
    doc = {
        "group": group.name,
        "group_order": group.order,
        "subgroup_order": sub.order,
        "subgroup_elements": sorted(sub.elements),
        "d_max": table.d_max,
        "k": k,
        "theorem1_bound": theorem1_bound(group.order, sub.order, table.d_max, k),
        "repeated_irrep": {
            "exact": rep.exact,
            "bound": rep.bound,
            "bound_applicable": applicable,
            "satisfied": ok,
        },
    }
    failures = [] if ok else [f"repeated-irrep probability {rep.exact} exceeds {rep.bound}"]
    return doc, failures


def cmd_hsp(args) -> Result:
    if args.k < 1:
        raise UsageError("--k must be positive")
    group = make_group(args.group)
    sub = parse_subgroup(group, args.subgroup)
    table = character_table(group)
    doc, failures = _hsp_common(group, sub, table, args.k)
    doc["subgroup"] = args.subgroup
    doc["mode"] = args.mode
    if args.mode == "fourier":
        rho = hidden_subgroup_state(group, sub).entries
        rows, entries, worst = [], [], 0.0
        for label, dim in zip(table.labels, table.dims):
            p = fourier_probability_exact(group, sub, label, table)
            traced = np.trace(isotypic_projector(group, table, label) @ rho).real
            worst = max(worst, abs(traced - float(p)))
            entries.append({"irrep": label, "dim": dim, "probability": p})
            rows.append([label, dim, *rational(p).values()])
        if worst > 1e-9:
            raise InvariantViolation(f"character formula and projector trace differ by {worst}")
        doc["rows"] = entries
        doc["max_trace_deviation"] = decimal_string(worst)
        return Result("hsp", doc, ["irrep", "dim", "probability_exact", "probability_decimal"], rows, failures)
    if args.mode == "schur":
        rho = hidden_subgroup_state(group, sub).entries
        n = group.order
        if n**args.k > 4096:
            raise CapExceeded(f"|G|^k = {n}^{args.k} exceeds 4096")
        dist = weak_schur_dist(tensor_power(rho, args.k), args.k, n)
        doc["rows"] = [{"partition": lam, "probability": decimal_string(p)} for lam, p in dist.probs.items()]
        doc["clamped"] = [[str(lam), decimal_string(v)] for lam, v in dist.clamped]
        rows = [[str(lam), decimal_string(p)] for lam, p in dist.probs.items()]
        return Result("hsp", doc, ["partition", "probability"], rows, failures)
    # joint
    joint = joint_fourier_schur(group, sub, args.k, table)
    reference = planch(args.k)
    conditionals, worst = [], 0.0
    for t in joint.types():
        if not joint.multiplicity_free(t) or joint.type_marginal()[t] <= JOINT_TOL:
            continue
        cond = joint.conditional(t)
        dev = max(abs(cond.get(lam, 0.0) - float(reference[lam])) for lam in reference)
        worst = max(worst, dev)
        conditionals.append({
            "irrep_type": list(t),
            "max_deviation_from_planch": decimal_string(dev),
            "distribution": {str(lam): decimal_string(p) for lam, p in cond.items()},
        })
    if worst > JOINT_TOL:
        failures.append(f"multiplicity-free conditional deviates from Planch({args.k}) by {worst}")
    rows = [["|".join(t), str(lam), decimal_string(p)] for (t, lam), p in joint.entries.items()]
    doc["rows"] = [{"irrep_type": list(t), "partition": lam, "probability": decimal_string(p)}
                   for (t, lam), p in joint.entries.items()]
    doc["multiplicity_free_conditionals"] = conditionals
    doc["clamped"] = [[str(key), decimal_string(v)] for key, v in joint.clamped]
    return Result("hsp", doc, ["irrep_type", "partition", "probability"], rows, failures)


# collision

def cmd_collision(args) -> Result:
    if args.action == "advantage":
        ks = args.k
        entries, rows = [], []
        for k in ks:
            adv = distinguish_advantage(k, args.d, args.r)
            entries.append({"k": k, "l1": adv.l1, "success": adv.success})
            rows.append([args.d, args.r, k, *rational(adv.l1).values(), *rational(adv.success).values()])
        succ = [e["success"] for e in entries]
        doc = {"d": args.d, "r": args.r, "rows": entries,
               "non_decreasing_in_k": all(a <= b for a, b in zip(succ, succ[1:])) if ks == sorted(ks) else None}
        header = ["d", "r", "k", "l1_exact", "l1_decimal", "success_exact", "success_decimal"]
        return Result("collision_advantage", doc, header, rows)
    if args.action == "plan":
        plan = plan_collision_algorithm(args.d, args.r)
        doc = {
            "d": plan.d, "r": plan.r, "table_size": plan.table_size, "m": plan.m,
            "grover_iters": plan.grover_iters, "total_queries": plan.total_queries,
            "metadata": {key: decimal_string(v) if isinstance(v, float) else v for key, v in plan.metadata.items()},
        }
        header = ["d", "r", "table_size", "m", "grover_iters", "total_queries"]
        return Result("collision_plan", doc, header, [[doc[h] for h in header]])
    # montecarlo
    cases = ["one_to_one", "r_to_one"] if args.case == "both" else [args.case]
    reports = [montecarlo_collision(args.d, args.r, args.trials, args.seed, c, args.grover_iters) for c in cases]
    header = ["case", "d", "r", "trials", "seed", "grover_iters", "success_rate", "mean_queries", "mean_marked"]
    entries = [{h: getattr(rep, h) for h in header} for rep in reports]
    rows = [[rep.case, rep.d, rep.r, rep.trials, rep.seed, rep.grover_iters,
             repr(rep.success_rate), repr(rep.mean_queries), repr(rep.mean_marked)] for rep in reports]
    doc = {"d": args.d, "r": args.r, "trials": args.trials, "seed": args.seed, "reports": entries}
    if len(reports) == 2:
        doc["success_gap"] = reports[1].success_rate - reports[0].success_rate
    return Result("collision_montecarlo", doc, header, rows)


# swaptest

def cmd_swaptest(args) -> Result:
    if args.trials < 1 or args.branches < 1:
        raise UsageError("--trials and --branches must be positive")
    unitary = amplified_swap_unitary(args.m, args.dim)
    entries, rows = [], []
    all_pass = True
    for trial in range(args.trials):
        rng = np.random.default_rng(np.random.SeedSequence(args.seed, spawn_key=(trial,)))
        res = swap_fidelity(random_instance(args.m, args.dim, args.branches, rng), unitary)
        err = abs(res.fidelity - res.exact_formula)
        passed = err <= SWAP_TOL and res.fidelity >= res.bound - SWAP_TOL
        all_pass &= passed
        entries.append({"trial": trial, "fidelity": res.fidelity, "exact_formula": res.exact_formula,
                        "bound": res.bound, "abs_error": err, "passed": passed, "vacuous": res.vacuous})
        rows.append([trial, repr(res.fidelity), repr(res.exact_formula), repr(res.bound),
                     repr(err), str(passed).lower(), str(res.vacuous).lower()])
    fids = [e["fidelity"] for e in entries]
    bound = entries[0]["bound"]
    doc = {"m": args.m, "dim": args.dim, "branches": args.branches, "trials": args.trials, "seed": args.seed,
           "bound": bound, "vacuous": bound <= 0, "min_fidelity": min(fids), "all_pass": all_pass,
           "rows": entries}
    header = ["trial", "fidelity", "exact_formula", "bound", "abs_error", "passed", "vacuous"]
    failures = [] if all_pass else ["swap-test fidelity outside tolerance or below the bound"]
    return Result("swaptest", doc, header, rows, failures)


# plumbing

def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="schurlab", description=__doc__.split("\n")[0])
    parser.add_argument("--version", action="version", version=f"schurlab {__version__}")
    common = _Parser(add_help=False)
    common.add_argument("--out", type=Path, help="directory for JSON/CSV files and manifest.json")
    common.add_argument("--format", choices=["json", "csv", "both"], default="json")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("dist", parents=[common], help="Plancherel/Schur distributions and bound checks")
    p.add_argument("--k", type=int)
    p.add_argument("--d", type=int)
    p.add_argument("--compare", choices=["planch", "schur", "both"])
    p.add_argument("--bounds", action="store_true", help="attach bound reports that apply at (k, d)")
    p.add_argument("--d2", type=int, help="second dimension for the monotonicity check")
    p.add_argument("--r", type=int, help="scale factor for the monotonicity check")
    p.add_argument("--sweep", action="store_true", help="grid 1..k-max x 1..d-max")
    p.add_argument("--k-max", type=int)
    p.add_argument("--d-max", type=int)
    p.set_defaults(func=cmd_dist)

    p = sub.add_parser("hsp", parents=[common], help="weak Fourier / Schur sampling of coset states")
    p.add_argument("--group", required=True, help="family:param, e.g. dihedral:6")
    p.add_argument("--subgroup", required=True, help="trivial|full|reflection:j|gen:...")
    p.add_argument("--k", type=int, default=1)
    p.add_argument("--mode", choices=["fourier", "schur", "joint"], default="fourier")
    p.set_defaults(func=cmd_hsp)

    p = sub.add_parser("collision", parents=[common], help="collision distinguisher and algorithm accounting")
    p.add_argument("action", choices=["advantage", "plan", "montecarlo"])
    p.add_argument("--d", type=int, required=True)
    p.add_argument("--r", type=int, required=True)
    p.add_argument("--k", type=int, nargs="+", default=[2], help="copy counts for 'advantage'")
    p.add_argument("--trials", type=int, default=10000)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--case", choices=["both", "one_to_one", "r_to_one"], default="both")
    p.add_argument("--grover-iters", type=int)
    p.set_defaults(func=cmd_collision)

    p = sub.add_parser("swaptest", parents=[common], help="amplified swap test on random instances")
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--dim", type=int, default=2)
    p.add_argument("--branches", type=int, default=2)
    p.add_argument("--trials", type=int, default=50)
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=cmd_swaptest)
    return parser


def _parameters(args) -> dict:
    skip = {"func", "out", "format", "command"}
    return {key: (str(v) if isinstance(v, Path) else v) for key, v in sorted(vars(args).items()) if key not in skip}


def _timestamp() -> str:
    epoch = os.environ.get("SOURCE_DATE_EPOCH")
    t = int(epoch) if epoch else time.time()
    return time.strftime("%Y-%m-%dT%H:%M:%SZ", time.gmtime(t))


def _emit(args, result: Result) -> None:
    params = _parameters(args)
    outputs = []
    if args.out is not None:
        if args.format in ("json", "both"):
            outputs.append(f"{result.name}.json")
        if args.format in ("csv", "both"):
            outputs.append(f"{result.name}.csv")
    manifest = {
        "command": args.command,
        "parameters": params,
        "tool_version": __version__,
        "seed": params.get("seed"),
        "outputs": outputs + (["manifest.json"] if outputs else []),
    }
    doc = {"schema": f"schurlab.{result.name}", "schema_version": SCHEMA_VERSION, "manifest": manifest}
    doc.update(result.doc)
    text = dumps(doc)
    if args.out is not None:
        if args.format in ("json", "both"):
            atomic_write(args.out / f"{result.name}.json", text)
        if args.format in ("csv", "both"):
            atomic_write(args.out / f"{result.name}.csv", csv_text(result.header, result.rows))
        full = dict(manifest, timestamp=_timestamp(), schema="schurlab.manifest", schema_version=SCHEMA_VERSION)
        atomic_write(args.out / "manifest.json", dumps(full))
    sys.stdout.write(text)


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    cache.install()
    try:
        result = args.func(args)
        _emit(args, result)
    except CapExceeded as exc:
        _report_error(EXIT_CAP, "CapExceeded", str(exc))
        return EXIT_CAP
    except (InvariantViolation, ArithmeticError) as exc:
        _report_error(EXIT_INVARIANT, "InvariantViolation", str(exc))
        return EXIT_INVARIANT
    except ValueError as exc:
        _report_error(EXIT_USAGE, "UsageError", str(exc))
        return EXIT_USAGE
    finally:
        cache.uninstall()
    if result.failures:
        _report_error(EXIT_INVARIANT, "BoundViolation", "; ".join(result.failures))
        return EXIT_INVARIANT
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())

"""Scenario runner: ``nonadd run FILE``, ``nonadd suite DIR``, ``nonadd property``."""

from __future__ import annotations

import argparse
import csv
import dataclasses
import json
import math
import os
import sys
import time
from concurrent.futures import ProcessPoolExecutor
from importlib import resources
from pathlib import Path

import numpy as np

from . import __version__
from .analysis import check_inequality, is_rl_integrable_setfunction, run_convergence
from .errors import HypothesisViolated, NoSinglePoint, NonAddError, NotAnAtom
from .ground import EpSet, mask_points
from .interval import Interval
from .iv_integral import atom_convergence, iv_atom_integral, iv_indefinite, iv_monotonicity_suite, iv_rl_integrate
from .rl_integral import birkhoff_simple_integrate, compare_integrals, gould_integrate, rl_integrate
from .scenario import (
    ScenarioError,
    build_function,
    build_iv_function,
    build_iv_setfunc,
    build_sequence,
    build_set,
    build_setfunc,
    load,
    validate,
)
from .setfunc import classify, find_atoms, semivariation, variation

DEFAULT_SEED = 7
EXIT_OK, EXIT_FAIL, EXIT_INPUT, EXIT_HYPOTHESIS = 0, 1, 2, 3
STATUS = {EXIT_OK: "ok", EXIT_FAIL: "failed", EXIT_INPUT: "input_error", EXIT_HYPOTHESIS: "hypothesis_violated"}


# --------------------------------------------------------------------------- #
# serialization


def plain(x):
    """JSON-ready structure; sets become point lists or EpSet strings."""
    if isinstance(x, Interval):
        return [x.lo, x.hi]
    if isinstance(x, EpSet):
        return str(x)
    if isinstance(x, (np.floating, float)):
        return float(x)
    if isinstance(x, (np.integer,)):
        return int(x)
    if isinstance(x, np.ndarray):
        return [plain(v) for v in x.tolist()]
    if isinstance(x, dict):
        return {str(k): plain(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [plain(v) for v in x]
    if dataclasses.is_dataclass(x) and not isinstance(x, type):
        return {f.name: plain(getattr(x, f.name)) for f in dataclasses.fields(x)}
    if isinstance(x, (str, bool, int)) or x is None:
        return x
    return str(x)


def _num(v: float) -> str:
    if math.isnan(v):
        return '"nan"'
    if math.isinf(v):
        return '"inf"' if v > 0 else '"-inf"'
    return format(v, ".17g")


def dumps(obj, indent: int = 2, _level: int = 0) -> str:
    """JSON text with every float written to 17 significant digits."""
    pad = " " * (indent * (_level + 1))
    end = " " * (indent * _level)
    if isinstance(obj, bool) or obj is None:
        return json.dumps(obj)
    if isinstance(obj, float):
        return _num(obj)
    if isinstance(obj, (int, str)):
        return json.dumps(obj)
    if isinstance(obj, dict):
        if not obj:
            return "{}"
        items = [f"{pad}{json.dumps(str(k))}: {dumps(v, indent, _level + 1)}" for k, v in obj.items()]
        return "{\n" + ",\n".join(items) + "\n" + end + "}"
    if isinstance(obj, list):
        if not obj:
            return "[]"
        if all(isinstance(v, (int, float)) and not isinstance(v, bool) for v in obj):
            return "[" + ", ".join(dumps(v, indent, _level + 1) for v in obj) + "]"
        return "[\n" + ",\n".join(pad + dumps(v, indent, _level + 1) for v in obj) + "\n" + end + "]"
    raise TypeError(f"cannot serialize {type(obj).__name__}")


def _set_out(space, A):
    return mask_points(A) if space.is_finite else str(A)


def _flags_out(space, rep):
    out = {}
    for k, f in rep.flags.items():
        wit = [_set_out(space, w) if isinstance(w, (int, EpSet)) and not isinstance(w, bool) else plain(w) for w in f.witness]
        out[k] = {"status": f.status, "witness": wit, "note": f.note}
    return out


def _report_out(r):
    d = plain(r)
    d["trace"] = [[t.partition_index, t.block_count, t.sum_lo, t.sum_hi] for t in r.trace]
    return d


# --------------------------------------------------------------------------- #
# commands: each returns (result dict, checks list, traces)


def _check(name, passed, detail=None):
    c = {"name": name, "passed": bool(passed)}
    if detail is not None:
        c["detail"] = plain(detail)
    return c


def cmd_integrate(sc, opts):
    nu = sc.field("nu", build_setfunc)
    f = sc.field("f", build_function)
    E = sc.field("E", build_set, required=False)
    method = sc.params.get("method", "rl")
    if method == "rl":
        r = rl_integrate(f, nu, E)
    elif method == "birkhoff":
        r = birkhoff_simple_integrate(f, nu, E)
    else:
        r = gould_integrate(f, nu, E, budget=sc.params.get("budget", 64), tol=opts["tolerance"] or sc.params.get("tolerance", 1e-9))
    return {"integral": _report_out(r)}, [], r.trace


def cmd_variation(sc, opts):
    nu = sc.field("nu", build_setfunc)
    E = sc.field("E", build_set, required=False)
    E = sc.space.full() if E is None else E
    return {"E": _set_out(sc.space, E), "variation": variation(nu, E), "semivariation": semivariation(nu, E)}, [], ()


def cmd_atoms(sc, opts):
    nu = sc.field("nu", build_setfunc)
    return {"atoms": [mask_points(a) for a in find_atoms(nu)]}, [], ()


def cmd_classify(sc, opts):
    nu = sc.field("nu", build_setfunc)
    rep = classify(nu)
    rl = is_rl_integrable_setfunction(nu)
    return {
        "flags": _flags_out(sc.space, rep),
        "submeasure": rep.submeasure,
        "rl_integrable": {"holds": rl.holds, "witness": plain(rl.witness), "note": rl.note},
    }, [], ()


def cmd_compare(sc, opts):
    nu = sc.field("nu", build_setfunc)
    f = sc.field("f", build_function)
    tol = opts["tolerance"] or sc.params.get("tolerance", 1e-9)
    c = compare_integrals(f, nu, budget=sc.params.get("budget", 64), tol=tol)
    res = {
        "rl": _report_out(c.rl),
        "gould": _report_out(c.gould),
        "birkhoff": _report_out(c.birkhoff),
        "agree": c.agree,
        "counterexample_witness": plain(c.counterexample_witness),
    }
    return res, [], c.gould.trace


def cmd_inequality(sc, opts):
    nu = sc.field("nu", build_setfunc)
    g = sc.field("g", build_function)
    h = sc.field("h", build_function)
    kind = sc.params.get("kind", "holder")
    p = sc.params.get("p", 2.0)
    tol = opts["tolerance"] or sc.params.get("tolerance", 1e-12)
    r = check_inequality(kind, g, h, nu, p, sc.params.get("q"), tol=tol)
    checks = [_check(f"{kind}_holds", r.holds or not r.applicable, {"applicable": r.applicable})]
    return {"inequality": plain(r), "applicable": r.applicable}, checks, ()


def cmd_converge(sc, opts):
    mode = sc.params.get("mode", "uniform")
    nu = sc.field("nu", build_setfunc, required=False)
    Gamma = sc.field("Gamma", build_iv_setfunc, required=False)
    if nu is None and Gamma is None:
        raise ScenarioError(sc.source, "/nu", "converge needs nu or Gamma")
    spec = sc.field("sequence", build_sequence)
    B = sc.field("B", build_set, required=False)
    r = run_convergence(
        mode,
        spec,
        nu=nu,
        Gamma=Gamma,
        tol=opts["tolerance"] or sc.params.get("tolerance", 1e-8),
        p=sc.params.get("p", 2.0),
        B=B,
        level=sc.params.get("level", 1e-6),
        strict=sc.params.get("strict", False),
    )
    checks = [_check(f"{mode}_verdict", r.verdict or r.label == "exploratory", {"label": r.label})]
    return {"convergence": plain(r)}, checks, ()


def cmd_iv_integrate(sc, opts):
    Gamma = sc.field("Gamma", build_iv_setfunc)
    H = sc.field("H", build_iv_function)
    E = sc.field("E", build_set, required=False)
    r = iv_rl_integrate(H, Gamma, E)
    res = {"value": r.value, "lo": _report_out(r.lo), "hi": _report_out(r.hi), "crosscheck": r.crosscheck}
    checks = []
    if sc.space.is_finite:
        checks.append(_check("endpoint_decomposition", r.crosscheck is not None and r.crosscheck <= 1e-12, r.crosscheck))
        _, rep = iv_indefinite(H, Gamma, seed=opts["seed"])
        for c in rep.checks:
            checks.append(_check(f"T_H_{c.name}", c.passed, {"applicable": c.applicable, "checked": c.checked, "violations": c.violations}))
    return plain(res), checks, ()


def cmd_iv_suite(sc, opts):
    Gamma = sc.field("Gamma", build_iv_setfunc)
    H = sc.field("H", build_iv_function)
    G = sc.field("G", build_iv_function)
    G1 = sc.field("Gamma1", build_iv_setfunc, required=False)
    G2 = sc.field("Gamma2", build_iv_setfunc, required=False)
    rep = iv_monotonicity_suite(G, H, Gamma, G1, G2, seed=opts["seed"])
    checks = [
        _check(c.name, c.passed, {"applicable": c.applicable, "checked": c.checked, "violations": c.violations, "note": c.note})
        for c in rep.checks
    ]
    return {"passed": rep.passed, "applicable": [c.name for c in rep.checks if c.applicable]}, checks, ()


def cmd_atom_integrate(sc, opts):
    Gamma = sc.field("Gamma", build_iv_setfunc)
    H = sc.field("H", build_iv_function)
    B = sc.field("B", build_set)
    spec = sc.field("sequence", build_sequence, required=False)
    if spec is None:
        r = iv_atom_integral(H, Gamma, B)
        rows = []
    else:
        r, rows = atom_convergence(spec.sequence(), H, Gamma, B)
    checks = [_check("atom_formula_exact", r.exact, {"value": r.value, "integral": r.integral})]
    if rows:
        checks.append(_check("atom_distance_bound", all(x.distance <= x.bound + 1e-12 for x in rows)))
        checks.append(_check("atom_convergence", rows[-1].distance <= (opts["tolerance"] or 1e-8)))
    res = {"b": r.b, "value": r.value, "integral": r.integral, "hypotheses": r.hypotheses, "sequence": [plain(x) for x in rows]}
    return plain(res), checks, ()


COMMAND_TABLE = {
    "integrate": cmd_integrate,
    "variation": cmd_variation,
    "atoms": cmd_atoms,
    "classify": cmd_classify,
    "compare": cmd_compare,
    "inequality": cmd_inequality,
    "converge": cmd_converge,
    "iv-integrate": cmd_iv_integrate,
    "iv-suite": cmd_iv_suite,
    "atom-integrate": cmd_atom_integrate,
}


def _lookup(obj, path):
    for part in path.split("."):
        if isinstance(obj, list):
            obj = obj[int(part)]
        else:
            obj = obj[part]
    return obj


def _expect_checks(result, expect, tol):
    out = []
    for path, want in (expect or {}).items():
        try:
            got = _lookup(result, path)
        except (KeyError, IndexError, ValueError, TypeError):
            out.append(_check(f"expect:{path}", False, {"error": "missing"}))
            continue
        out.append(_check(f"expect:{path}", _matches(got, want, tol), {"got": got, "want": want}))
    return out


def _matches(got, want, tol):
    if isinstance(want, list):
        return isinstance(got, list) and len(got) == len(want) and all(_matches(a, b, tol) for a, b in zip(got, want))
    if want in ("inf", "-inf") and isinstance(got, float):
        return got == float(want)
    if isinstance(want, bool) or want is None or isinstance(want, str):
        return got == want
    if isinstance(got, (int, float)) and not isinstance(got, bool):
        return abs(got - want) <= tol * (1 + abs(want))
    return False


# --------------------------------------------------------------------------- #
# running


def run_scenario(path, seed=DEFAULT_SEED, tolerance=None, no_meta=False):
    """Run one scenario; returns ``(report dict, traces)``.  Never raises for input errors."""
    t0 = time.perf_counter()
    opts = {"seed": seed, "tolerance": tolerance}
    report = {"scenario": Path(str(path)).stem, "source": Path(str(path)).name, "command": None, "tags": []}
    traces = ()
    try:
        sc = load(path)
        report.update(scenario=sc.name, command=sc.command, tags=list(sc.tags))
        result, checks, traces = COMMAND_TABLE[sc.command](sc, opts)
        result = plain(result)
        checks = list(checks) + _expect_checks(result, sc.get("expect"), tolerance or 1e-9)
        code = EXIT_OK if all(c["passed"] for c in checks) else EXIT_FAIL
        report.update(result=result, checks=checks)
    except (HypothesisViolated, NotAnAtom, NoSinglePoint) as exc:
        code = EXIT_HYPOTHESIS
        report.update(error=f"{path}: {type(exc).__name__}: {exc}", checks=[])
    except ScenarioError as exc:
        code = EXIT_INPUT
        report.update(error=str(exc), checks=[])
    except (NonAddError, ValueError, TypeError, KeyError) as exc:
        code = EXIT_INPUT
        report.update(error=f"{path}: {type(exc).__name__}: {exc}", checks=[])
    report["status"] = STATUS[code]
    report["exit_code"] = code
    if not no_meta:
        report["meta"] = {"version": __version__, "seed": seed, "elapsed_s": time.perf_counter() - t0, "timestamp": time.time()}
    return report, traces


def write_trace_csv(path, traces):
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["partition_index", "block_count", "sum_lo", "sum_hi"])
        for t in traces:
            w.writerow([t.partition_index, _num(float(t.block_count)).strip('"'), _num(t.sum_lo), _num(t.sum_hi)])


def _emit(text, out):
    if out:
        Path(out).write_text(text + "\n")
    else:
        sys.stdout.write(text + "\n")


def _run_one(args):
    path, seed, tol, no_meta = args
    return run_scenario(path, seed, tol, no_meta)[0]


def bundled_suite_dir() -> Path:
    env = os.environ.get("NONADD_SCENARIO_PATH")
    if env:
        return Path(env)
    return Path(str(resources.files("nonadd").joinpath("scenarios", "theorems")))


def run_suite(directory, seed=DEFAULT_SEED, tolerance=None, no_meta=False, jobs=1):
    directory = Path(directory)
    files = sorted(p for p in directory.glob("*.json")) if directory.is_dir() else []
    work = [(str(p), seed, tolerance, no_meta) for p in files]
    if jobs > 1 and len(work) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as ex:
            reports = list(ex.map(_run_one, work))
    else:
        reports = [_run_one(w) for w in work]
    tags = {}
    for r in reports:
        for t in r.get("tags") or ["untagged"]:
            d = tags.setdefault(t, {"passed": 0, "failed": 0})
            d["passed" if r["exit_code"] == 0 else "failed"] += 1
    summary = {
        "directory": directory.name,
        "scenarios": len(reports),
        "passed": sum(r["exit_code"] == 0 for r in reports),
        "failed": sum(r["exit_code"] != 0 for r in reports),
        "by_tag": dict(sorted(tags.items())),
        "reports": reports,
    }
    code = max([r["exit_code"] for r in reports], default=0)
    return summary, code


def summary_table(summary) -> str:
    lines = [f"{'scenario':40s} {'command':15s} status"]
    for r in summary["reports"]:
        lines.append(f"{r['scenario'][:40]:40s} {str(r['command'])[:15]:15s} {r['status']}")
    lines.append(f"{summary['passed']}/{summary['scenarios']} passed")
    return "\n".join(lines)


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(prog="nonadd", description="Integration against non-additive set functions.")
    sub = ap.add_subparsers(dest="cmd", required=True)

    def common(p):
        p.add_argument("--out", help="write the JSON report here instead of stdout")
        p.add_argument("--seed", type=int, default=DEFAULT_SEED, help=f"seed for sampled checks (default {DEFAULT_SEED})")
        p.add_argument("--tolerance", type=float, default=None, help="override scenario tolerances")
        p.add_argument("--no-meta", action="store_true", help="omit timestamps and timings")

    p = sub.add_parser("run", help="run one scenario file")
    p.add_argument("scenario")
    p.add_argument("--trace-csv", help="write the refinement trace as CSV")
    common(p)
    p = sub.add_parser("suite", help="run every scenario in a directory")
    p.add_argument("directory", nargs="?", help="defaults to the bundled theorems/ suite")
    p.add_argument("--jobs", type=int, default=1)
    common(p)
    p = sub.add_parser("validate", help="check scenario files against the schema")
    p.add_argument("files", nargs="+")
    p = sub.add_parser("property", help="seeded randomized theorem checks")
    p.add_argument("--cases", type=int, default=200)
    common(p)
    args = ap.parse_args(argv)

    if args.cmd == "run":
        report, traces = run_scenario(args.scenario, args.seed, args.tolerance, args.no_meta)
        _emit(dumps(report), args.out)
        if args.trace_csv:
            write_trace_csv(args.trace_csv, traces)
        if report.get("error"):
            print(report["error"], file=sys.stderr)
        return report["exit_code"]
    if args.cmd == "suite":
        d = Path(args.directory) if args.directory else bundled_suite_dir()
        summary, code = run_suite(d, args.seed, args.tolerance, args.no_meta, args.jobs)
        if summary["scenarios"] == 0:
            print(f"warning: no scenarios found in {d}", file=sys.stderr)
        _emit(dumps(summary), args.out)
        print(summary_table(summary), file=sys.stderr)
        return code
    if args.cmd == "validate":
        code = 0
        for f in args.files:
            try:
                validate(json.loads(Path(f).read_text()), f)
                print(f"{f}: ok")
            except (ScenarioError, json.JSONDecodeError) as exc:
                print(f"{f}: {exc}", file=sys.stderr)
                code = EXIT_INPUT
        return code
    from .properties import run_properties

    summary = run_properties(args.cases, args.seed)
    _emit(dumps(plain(summary)), args.out)
    return EXIT_OK if all(v["violations"] == 0 for v in summary["checks"].values()) else EXIT_FAIL


if __name__ == "__main__":
    sys.exit(main())

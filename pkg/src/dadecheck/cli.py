"""Command-line driver.

    dadecheck verify {dade|lemmas|fixrows|weyl|classes|relations|all} [options]
    dadecheck params --n N --set ID [--list]
    dadecheck report FILE

Options shared by the verify subcommands: --n (repeatable), --max-n, --mode
{formula,bruteforce,both}, --budget, --workers, --data-dir, --report PATH,
--config FILE (key = value lines, overridden by flags).  The data directory
defaults to the packaged tables, or $DADE_DATA_DIR.

Every check instance becomes one JSON record
    {"schema": 1, "check": ..., "name": ..., "n": ..., "expected": ...,
     "actual": ..., "status": "pass"|"fail", "millis": ...}
and the process exits 0 only if every record passed (2 on usage/parse errors).
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from concurrent.futures import ProcessPoolExecutor
from typing import Dict, List, Optional

from . import load_model
from . import autfix, chartables, dadeverify, paramsets, rootdatum
from .paramsets import DEFAULT_BUDGET
from .tabledsl import TableSyntaxError, DanglingReference

ALL_CHECKS = ("lemmas", "params", "fixrows", "dade", "weyl", "classes", "relations")
SCHEMA = 1


def _rec(check, name, n, expected, actual, millis, **extra):
    status = "pass" if expected == actual else "fail"
    rec = {
        "schema": SCHEMA,
        "check": check,
        "name": str(name),
        "n": n,
        "expected": repr(expected),
        "actual": repr(actual),
        "status": status,
        "millis": round(millis, 3),
    }
    rec.update(extra)
    return rec



# ---- check runners (module level so a worker pool can dispatch them) ---------

_MODEL = None
_DATA_DIR = None


def _model():
    global _MODEL
    if _MODEL is None:
        _MODEL = load_model(_DATA_DIR)
    return _MODEL


def _init_worker(data_dir):
    global _DATA_DIR
    _DATA_DIR = data_dir


def run_task(task) -> List[dict]:
    kind, n, cfg = task
    model = _model()
    budget = cfg["budget"]
    mode = cfg["mode"]
    t0 = time.perf_counter()
    out: List[dict] = []

    def ms():
        return 1000.0 * (time.perf_counter() - t0)

    if kind == "lemmas":
        recs = autfix.verify_gcd_lemmas(cfg["max_n"])
        for r in recs:
            out.append(_rec("lemma_" + r.lemma, r.params, None, r.expected, r.actual, ms()))
    elif kind == "params":
        for r in paramsets.cardinality_check(model, n, budget):
            out.append(_rec(r.check, r.name, n, r.expected, r.actual, ms()))
        for r in paramsets.semisimple_sum_checks(model, n):
            out.append(_rec(r.check, r.name, n, r.expected, r.actual, ms()))
        for r in paramsets.trusted_input_flags(model):
            out.append(_rec(r.check, r.name, None, r.expected, r.actual, ms()))
    elif kind == "fixrows":
        for r in autfix.verify_fixrows(model, n, budget):
            expected = r.formula
            actual = r.formula if r.brute is None else r.brute
            out.append(
                _rec("fixrow", r.row, n, expected, actual, ms(), t=r.t)
            )
        for r in autfix.verify_mobius_layer(model, n):
            out.append(_rec("mobius", r.lemma[0], n, r.expected, r.actual, ms(),
                            t=r.lemma[2]))
    elif kind == "dade":
        modes = ("formula", "bruteforce") if mode == "both" else (mode,)
        cells: Dict[tuple, dict] = {}
        for md in modes:
            for r in dadeverify.verify_dade(model, n, md, budget):
                out.append(
                    _rec(f"dade_{md}" if len(modes) > 1 else "dade",
                         r.ledger, n, (r.rhs, True, True), (r.lhs, r.tokens_match, r.alt_sum_zero),
                         ms(), d=r.d, u=r.u)
                )
                cells.setdefault((r.ledger, r.u), {})[md] = (r.lhs, r.rhs)
        if len(modes) > 1:
            for (ledger, u), got in sorted(cells.items()):
                out.append(
                    _rec("dade_mode_agreement", ledger, n,
                         got["formula"], got["bruteforce"], ms(), u=u)
                )
        for r in dadeverify.verify_dade_exact_level(model, n):
            out.append(_rec("dade_exact", r.ledger, n, r.rhs, r.lhs, ms(), d=r.d, u=r.u))
        for r in dadeverify.ledger_consistency(model, n):
            out.append(_rec(r.check, r.name, n, r.expected, r.actual, ms()))
    elif kind == "weyl":
        for r in rootdatum.weyl_table_checks(model, (n,)):
            out.append(_rec(r.check, r.name, r.n, r.expected, r.actual, ms()))
        for r in rootdatum.torus_param_checks(model, n):
            out.append(_rec(r.check, r.name, n, r.expected, r.actual, ms()))
        for r in rootdatum.dual_torus_check(model, n):
            out.append(_rec(r.check, r.name, n, r.expected, r.actual, ms()))
        for r in rootdatum.pairing_checks(model, n):
            out.append(_rec(r.check, r.name, n, r.expected, r.actual, ms()))
        for r in rootdatum.subsystem_checks(model):
            out.append(_rec(r.check, r.name, None, r.expected, r.actual, ms()))
    elif kind == "classes":
        for r in chartables.class_equation(model, n):
            out.append(_rec(r.check, r.name, n, r.expected, r.actual, ms()))
    elif kind == "relations":
        for r in chartables.f_relations_check(model, numeric_n=(n,)):
            out.append(_rec(r.check, r.name, r.n, r.expected, r.actual, ms()))
        for r in chartables.exponent_integrality(model, (n,)):
            out.append(_rec(r.check, r.name, n, r.expected, r.actual, ms()))
        if n <= 2:
            for which in ("f8", "f10"):
                for r in chartables.f_norm_check(model, n, which):
                    out.append(_rec(r.check, r.name, n, r.expected, r.actual, ms()))
        for r in chartables.degree_identity_check(model, (n,)):
            out.append(_rec(r.check, r.name, r.n, r.expected, r.actual, ms()))
    else:
        raise ValueError(f"unknown check {kind}")
    return out


# ---- argument handling ---------------------------------------------------------


def _read_config(path) -> Dict[str, str]:
    cfg = {}
    with open(path, encoding="utf-8") as fh:
        for line in fh:
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            if "=" not in line:
                raise ValueError(f"bad config line: {line!r}")
            key, val = line.split("=", 1)
            cfg[key.strip()] = val.strip()
    return cfg


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="dadecheck", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp):
        sp.add_argument("--n", action="append", type=int, default=None,
                        help="instance size n (repeatable); q^2 = 2^(2n+1)")
        sp.add_argument("--max-n", type=int, default=None,
                        help="run every n from 1 to this bound")
        sp.add_argument("--mode", choices=("formula", "bruteforce", "both"),
                        default=None)
        sp.add_argument("--budget", type=int, default=None,
                        help="enumeration budget (tuples per set)")
        sp.add_argument("--workers", type=int, default=None)
        sp.add_argument("--data-dir", default=None)
        sp.add_argument("--report", default=None, help="write the JSON report here")
        sp.add_argument("--config", default=None, help="key = value defaults file")

    pv = sub.add_parser("verify", help="run a checker suite")
    pv.add_argument("what", choices=ALL_CHECKS + ("all",))
    common(pv)

    pp = sub.add_parser("params", help="enumerate one parameter set")
    pp.add_argument("--set", required=True, dest="set_id")
    pp.add_argument("--list", action="store_true", help="print class representatives")
    common(pp)

    pr = sub.add_parser("report", help="summarize a previously written report")
    pr.add_argument("file")
    return p


_DEFAULTS = {"mode": "formula", "budget": DEFAULT_BUDGET, "workers": 1}


def _resolve_options(args) -> Dict[str, object]:
    cfg = dict(_DEFAULTS)
    if args.config:
        file_cfg = _read_config(args.config)
        for key in ("mode", "data_dir", "report"):
            if key in file_cfg:
                cfg[key] = file_cfg[key]
        for key in ("budget", "workers", "max_n"):
            if key in file_cfg:
                cfg[key] = int(file_cfg[key])
        if "n" in file_cfg:
            cfg["n_list"] = [int(x) for x in file_cfg["n"].split(",")]
    for key in ("mode", "budget", "workers", "report"):
        v = getattr(args, key, None)
        if v is not None:
            cfg[key] = v
    if getattr(args, "data_dir", None) is not None:
        cfg["data_dir"] = args.data_dir
    if getattr(args, "max_n", None) is not None:
        cfg["max_n"] = args.max_n
        cfg["n_list"] = list(range(1, args.max_n + 1))
    if getattr(args, "n", None):
        cfg["n_list"] = list(args.n)
    cfg.setdefault("n_list", [1])
    cfg.setdefault("max_n", max(cfg["n_list"]))
    cfg.setdefault("data_dir", None)
    cfg.setdefault("report", None)
    if not cfg["n_list"]:
        raise ValueError("n list must be nonempty")
    if cfg["budget"] < (1 << 16):
        raise ValueError("budget must be at least 2^16")
    return cfg


def _emit(records: List[dict], cfg) -> int:
    records.sort(key=lambda r: (r["check"], str(r.get("n")), r["name"],
                                str(r.get("t", "")), str(r.get("u", ""))))
    # instance-independent checks re-run per n; keep one copy of each
    seen = set()
    unique = []
    for r in records:
        key = (r["check"], r["name"], r.get("n"), r.get("t"), r.get("u"),
               r["expected"], r["actual"])
        if key in seen:
            continue
        seen.add(key)
        unique.append(r)
    records = unique
    text = json.dumps(records, indent=1)
    if cfg.get("report"):
        with open(cfg["report"], "w", encoding="utf-8") as fh:
            fh.write(text + "\n")
    failures = [r for r in records if r["status"] == "fail"]
    passes = len(records) - len(failures)
    for r in failures[:40]:
        print(f"FAIL {r['check']} {r['name']} n={r.get('n')} "
              f"expected {r['expected']} got {r['actual']}", file=sys.stderr)
    print(f"{passes} passed, {len(failures)} failed of {len(records)} checks")
    return 1 if failures else 0


def main(argv: Optional[List[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        if args.command == "report":
            return _cmd_report(args.file)
        cfg = _resolve_options(args)
    except (ValueError, OSError) as e:
        print(f"error: {e}", file=sys.stderr)
        return 2

    global _DATA_DIR, _MODEL
    _DATA_DIR = cfg["data_dir"]
    _MODEL = None
    try:
        if args.command == "params":
            return _cmd_params(args, cfg)
        return _cmd_verify(args, cfg)
    except (TableSyntaxError, DanglingReference, OSError) as e:
        print(f"error: {e}", file=sys.stderr)
        return 2


def _cmd_params(args, cfg) -> int:
    model = _model()
    if args.set_id not in model.paramsets:
        print(f"error: unknown set {args.set_id}", file=sys.stderr)
        return 2
    spec = model.paramsets[args.set_id]
    records = []
    for n in cfg["n_list"]:
        t0 = time.perf_counter()
        enum = paramsets.enumerate_classes(spec, n, cfg["budget"])
        millis = 1000.0 * (time.perf_counter() - t0)
        expected = paramsets.formula_count(spec, n) if spec.card else enum.count
        records.append(
            _rec("cardinality", spec.id, n, expected, enum.count, millis)
        )
        if args.list:
            for rep in enum.representatives():
                print(" ".join(str(x) for x in rep))
    return _emit(records, cfg)


def _cmd_verify(args, cfg) -> int:
    kinds = ALL_CHECKS if args.what == "all" else (args.what,)
    tasks = []
    for kind in kinds:
        if kind == "lemmas":
            tasks.append((kind, None, {"max_n": cfg["max_n"], "budget": cfg["budget"],
                                       "mode": cfg["mode"]}))
        else:
            for n in cfg["n_list"]:
                tasks.append((kind, n, {"max_n": cfg["max_n"], "budget": cfg["budget"],
                                        "mode": cfg["mode"]}))
    records: List[dict] = []
    if cfg["workers"] > 1 and len(tasks) > 1:
        with ProcessPoolExecutor(
            max_workers=cfg["workers"], initializer=_init_worker,
            initargs=(cfg["data_dir"],),
        ) as pool:
            for batch in pool.map(run_task, tasks):
                records.extend(batch)
    else:
        for task in tasks:
            records.extend(run_task(task))
    return _emit(records, cfg)


def _cmd_report(path) -> int:
    with open(path, encoding="utf-8") as fh:
        records = json.load(fh)
    by_check: Dict[str, List[dict]] = {}
    for r in records:
        by_check.setdefault(r["check"], []).append(r)
    failures = 0
    for check in sorted(by_check):
        recs = by_check[check]
        bad = [r for r in recs if r["status"] == "fail"]
        failures += len(bad)
        print(f"{check:28s} {len(recs) - len(bad):6d} passed {len(bad):4d} failed")
    print(f"total: {len(records)} records, {failures} failures")
    return 1 if failures else 0


if __name__ == "__main__":
    sys.exit(main())

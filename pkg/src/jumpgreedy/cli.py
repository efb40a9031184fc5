"""Command-line interface: validate, solve, verify, gen.

Exit codes: 0 success/pass, 1 property violation or non-optimal result,
2 input error.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from concurrent.futures import ProcessPoolExecutor

from jumpgreedy.core import format_point
from jumpgreedy.delta_matroid import (
    check_corollary3_step,
    dm_greedy,
    dm_is_locally_optimal,
    dm_optimum,
    dm_refined_choices,
    elements_of,
    enumerate_delta_matroids,
    mask_of,
)
from jumpgreedy.instance_io import (
    Instance,
    InstanceFormatError,
    InstanceInvalid,
    dumps,
    instance_to_dict,
    load_instance,
    load_trace,
    replay,
    solve_instance,
    trace_from_dict,
    validation_failures,
)
from jumpgreedy.jump_systems import (
    JumpSystemError,
    graph_from_params,
    make_rng,
    materialize,
    random_filtered,
)
from jumpgreedy.objective import random_objective
from jumpgreedy.oracle import (
    CHECKS,
    OptimalityProfile,
    sweep,
    verify_bounds,
    verify_corollary1,
    verify_monotone,
)
from jumpgreedy.solvers import SolverError, is_locally_optimal

EXIT_OK, EXIT_FAIL, EXIT_INPUT = 0, 1, 2
THREADS_ENV = "JUMPGREEDY_THREADS"
ALL_CHECKS = CHECKS + ("cor3",)


class UsageError(Exception):
    pass


def _parse_point(text: str) -> tuple:
    text = text.strip().strip("()[]")
    if not text:
        return ()
    try:
        return tuple(int(v) for v in text.split(","))
    except ValueError as exc:
        raise UsageError(f"bad point {text!r}") from exc


def _print(line: str = "") -> None:
    print(line, flush=True)


# validate -------------------------------------------------------------


def cmd_validate(args) -> int:
    inst = load_instance(args.instance, strict=False)
    fails = validation_failures(inst)
    if not fails:
        _print(f"PASS {args.instance}")
        return EXIT_OK
    for check, msg in fails:
        _print(f"FAIL {check}: {msg}")
    return EXIT_FAIL


# solve ----------------------------------------------------------------


def cmd_solve(args) -> int:
    if args.tpolicy is not None and args.algo != "greedy":
        raise UsageError("--tpolicy only applies to --algo greedy")
    if args.algo.startswith("dm-") and args.tie != "lex":
        raise UsageError("delta-matroid algorithms support only --tie lex")
    inst = load_instance(args.instance)
    start = None
    if args.start is not None:
        if args.algo.startswith("dm-"):
            start = mask_of(e - 1 for e in _parse_point(args.start))
            if start not in inst.dm:
                raise UsageError(f"start {args.start} is not a feasible set")
        else:
            start = _parse_point(args.start)
            J, _, _ = inst.jump_view()
            if len(start) != J.dimension or not J.contains(start):
                raise UsageError(f"start {format_point(start)} is not in the jump system")
    doc = solve_instance(inst, args.algo, args.tie, args.tpolicy or "best", start, args.annotate_mu)
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(dumps(doc))
    optimal = True
    for k, tr in enumerate(doc["traces"]):
        prefix = f"[{k}] " if len(doc["traces"]) > 1 else ""
        if args.algo.startswith("dm-"):
            final = "{" + ",".join(str(e) for e in tr["final"]) + "}"
            optimal &= dm_is_locally_optimal(inst.dm, inst.weights, mask_of(e - 1 for e in tr["final"]))
        else:
            final = format_point(tr["final"])
            J, f, _ = inst.jump_view()
            optimal &= is_locally_optimal(J, f, tr["final"])
        _print(f"{prefix}final: {final}  value: {tr['final_value']}  steps: {tr['step_count']}")
    if doc["truncated"]:
        _print("truncated: branch cap reached")
    return EXIT_OK if optimal else EXIT_FAIL


# verify ---------------------------------------------------------------


def _verify_trace(inst: Instance, trace_path, checks) -> list[tuple[str, bool, object]]:
    doc = load_trace(trace_path)
    if doc.get("instance_digest") != inst.digest():
        raise UsageError("trace was recorded for a different instance")
    out = [("replay", replay(inst, doc), None)]
    if doc["algorithm"].startswith("dm-"):
        if "cor3" in checks:
            bad = None
            tr = doc["traces"][0]
            for k, st in enumerate(tr["steps"]):
                F = mask_of(e - 1 for e in st["F"])
                msg = check_corollary3_step(inst.dm, inst.weights, F, st["i"] - 1, st["j"] - 1)
                if msg:
                    bad = {"step": k, "detail": msg}
                    break
            out.append(("cor3", bad is None, bad))
        return out
    J, f, _ = inst.jump_view()
    profile = OptimalityProfile(J, f)
    for index in range(len(doc["traces"])):
        trace = trace_from_dict(doc, index)
        if "cor1" in checks:
            rep = verify_corollary1(J, f, trace, profile)
            bad = rep.first_violation
            payload = None
            if bad is not None:
                payload = dict(bad.as_dict(), refined_origin=rep.refined_origin)
            out.append(("cor1", rep.ok, payload))
        if "thm2" in checks and trace.algorithm == "greedy":
            msg = verify_bounds(J, f, trace, "greedy", profile)
            out.append(("thm2", msg is None, msg))
        if "cor2" in checks and trace.algorithm == "refined":
            msg = verify_bounds(J, f, trace, "refined", profile)
            out.append(("cor2", msg is None, msg))
        if "thm3" in checks and trace.algorithm in ("greedy", "refined"):
            k = verify_monotone(trace)
            out.append(("thm3", k is None, None if k is None else {"step": k}))
    return out


def _sweep_dm(inst: Instance) -> tuple[bool, object, int]:
    D, c = inst.dm, inst.weights
    opt, _ = dm_optimum(D, c)
    from jumpgreedy.delta_matroid import cost

    count = 0
    if cost(c, dm_greedy(D, c)) != opt:
        return False, {"detail": "dm_greedy is not optimal"}, 1
    for F in D.family:
        for i, j in dm_refined_choices(D, c, F):
            count += 1
            msg = check_corollary3_step(D, c, F, i, j)
            if msg:
                return False, {"F": [e + 1 for e in elements_of(F)], "i": i + 1, "j": j + 1, "detail": msg}, count
    return True, None, count


def _verify_instance(path, checks) -> list[tuple[str, bool, object]]:
    inst = load_instance(path)
    rows = []
    if "cor3" in checks:
        if not inst.is_dm:
            raise UsageError("cor3 applies only to delta-matroid instances")
        ok, payload, count = _sweep_dm(inst)
        rows.append(("cor3", ok, payload if not ok else f"{count} steps"))
    jchecks = [c for c in checks if c != "cor3"]
    if jchecks:
        J, f, _ = inst.jump_view()
        res = sweep(J, f, jchecks)
        for check in jchecks:
            v = res.violations.get(check)
            rows.append((check, v is None, v.as_dict() if v else f"{res.checked.get(check, 0)} checked"))
        for extra, v in res.violations.items():
            if extra not in jchecks:
                rows.append((extra, False, v.as_dict()))
    return rows


def _verify_worker(item):
    path, checks = item
    try:
        return path, _verify_instance(path, checks), None
    except (InstanceFormatError, InstanceInvalid, UsageError, JumpSystemError) as exc:
        return path, None, str(exc)


def cmd_verify(args) -> int:
    checks = list(ALL_CHECKS) if "all" in args.checks else list(args.checks)
    ok = True
    if args.trace:
        if len(args.instance) != 1:
            raise UsageError("--trace takes exactly one instance")
        inst = load_instance(args.instance[0])
        if "all" in args.checks and not inst.is_dm:
            checks = [c for c in checks if c != "cor3"]
        if "cor3" in checks and not inst.is_dm:
            raise UsageError("cor3 applies only to delta-matroid instances")
        rows = _verify_trace(inst, args.trace, checks)
        for name, passed, payload in rows:
            ok &= passed
            _emit(name, passed, payload)
        return EXIT_OK if ok else EXIT_FAIL

    threads = max(1, int(os.environ.get(THREADS_ENV, "1") or 1))
    items = []
    for path in args.instance:
        cks = checks
        if "all" in args.checks:
            # cor3 is part of "all" only where it applies
            try:
                cks = checks if load_instance(path, strict=False).is_dm else [c for c in checks if c != "cor3"]
            except InstanceFormatError:
                pass
        items.append((path, cks))
    if threads > 1 and len(items) > 1:
        with ProcessPoolExecutor(max_workers=threads) as pool:
            results = list(pool.map(_verify_worker, items))
    else:
        results = [_verify_worker(it) for it in items]
    input_error = False
    for path, rows, err in results:
        if len(results) > 1:
            _print(f"# {path}")
        if err is not None:
            _print(f"ERROR {err}")
            input_error = True
            continue
        for name, passed, payload in rows:
            ok &= passed
            _emit(name, passed, payload)
    if input_error:
        return EXIT_INPUT
    return EXIT_OK if ok else EXIT_FAIL


def _emit(name, passed, payload) -> None:
    if passed:
        _print(f"{name}: PASS" + (f" ({payload})" if payload else ""))
    else:
        _print(f"{name}: FAIL " + json.dumps(payload, ensure_ascii=False, sort_keys=True))


# gen ------------------------------------------------------------------


def _parse_params(items) -> dict:
    out = {}
    for item in items or []:
        if "=" not in item:
            raise UsageError(f"param {item!r} is not key=value")
        k, v = item.split("=", 1)
        out[k.strip()] = v.strip()
    return out


def _int_param(params, key, default=None):
    if key not in params:
        if default is None:
            raise UsageError(f"missing param {key}")
        return default
    try:
        return int(params[key])
    except ValueError as exc:
        raise UsageError(f"param {key} must be an integer") from exc


def _with_objective(J, params, seed, start=None) -> Instance:
    kind = params.get("objective", "linear")
    lo, hi = J.bbox
    f = random_objective(kind, lo, hi, make_rng([seed, 1]))
    if start is None:
        pts = J.points if hasattr(J, "points") else materialize(J).points
        start = pts[int(make_rng([seed, 2]).integers(len(pts)))]
    return Instance(system=J, objective=f, start=tuple(start))


def cmd_gen(args) -> int:
    params = _parse_params(args.params)
    seed = args.seed
    if args.kind == "dm-enum":
        n = _int_param(params, "n")
        rng = make_rng([seed, 3])
        out = sys.stdout if not args.out else open(args.out, "w", encoding="utf-8")
        try:
            for D in enumerate_delta_matroids(n):
                c = tuple(int(v) for v in rng.integers(-3, 4, size=n))
                inst = Instance(dm=D, weights=c, start=D.family[0])
                out.write(json.dumps(instance_to_dict(inst), sort_keys=True) + "\n")
        finally:
            if args.out:
                out.close()
        return EXIT_OK
    if args.kind == "box":
        n = _int_param(params, "n")
        side = _int_param(params, "side")
        if not (1 <= n <= 5 and 0 <= side <= 6):
            raise UsageError("box params outside desk-scale limits (n <= 5, side <= 6)")
        from jumpgreedy.jump_systems import box_system

        J = box_system([0] * n, [side] * n)
    elif args.kind == "graph":
        gp: dict = {"vertices": _int_param(params, "n")}
        edges = params.get("edges", "")
        if "-" in edges:
            pairs = []
            for tok in edges.split(","):
                a, b = tok.split("-")
                pairs.append((int(a) - 1, int(b) - 1))
            gp["edges"] = pairs
        else:
            gp["edges"] = _int_param(params, "edges")
        gp["loop_degree"] = _int_param(params, "loop_convention", 2)
        J = graph_from_params(gp, seed)
    else:
        J = random_filtered(
            _int_param(params, "n"),
            _int_param(params, "side"),
            seed,
            _int_param(params, "min_size", 2),
            _int_param(params, "max_size", 8),
            _int_param(params, "budget", 20000),
        )
    inst = _with_objective(J, params, seed)
    text = dumps(instance_to_dict(inst))
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return EXIT_OK


# main -----------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="jumpgreedy", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)

    v = sub.add_parser("validate", help="check axioms, convexity, domain and start")
    v.add_argument("instance")
    v.set_defaults(func=cmd_validate)

    s = sub.add_parser("solve", help="run a greedy algorithm and write a trace")
    s.add_argument("instance")
    s.add_argument("--algo", required=True, choices=["greedy", "refined", "refined2", "dm-greedy", "dm-refined"])
    s.add_argument("--tie", default="lex", choices=["lex", "all"])
    s.add_argument("--tpolicy", default=None, choices=["best", "worst", "first", "all"])
    s.add_argument("--start", default=None, help="start point, e.g. 0,0 (or 1-based set elements for dm-*)")
    s.add_argument("--out", default=None, help="trace file to write")
    s.add_argument("--annotate-mu", action="store_true", help="add oracle µ values to each step")
    s.set_defaults(func=cmd_solve)

    r = sub.add_parser("verify", help="exhaustive optimality/geodesic checks, or checks on a recorded trace")
    r.add_argument("instance", nargs="+")
    r.add_argument("--trace", default=None)
    r.add_argument("--checks", nargs="+", default=["all"], choices=list(ALL_CHECKS) + ["all"])
    r.set_defaults(func=cmd_verify)

    g = sub.add_parser("gen", help="emit generated instance files")
    g.add_argument("--kind", required=True, choices=["graph", "box", "filtered", "dm-enum"])
    g.add_argument("--seed", type=int, default=0)
    g.add_argument("--params", nargs="*", default=[], help="key=value pairs, e.g. n=2 side=2")
    g.add_argument("--out", default=None)
    g.set_defaults(func=cmd_gen)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_INPUT if exc.code else EXIT_OK
    try:
        return args.func(args)
    except (InstanceFormatError, InstanceInvalid, UsageError, JumpSystemError, SolverError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())

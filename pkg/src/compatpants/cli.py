"""Command-line driver.

Every command writes one JSON report (sorted keys) to stdout or ``--out``.
Exit codes: 0 pass, 1 check failure, 2 input error, 3 budget exhausted.
"""
from __future__ import annotations

import argparse
import hashlib
import json
import os
import random
import sys
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Any, Callable, Sequence

import numpy as np

from . import __version__
from .algebra.groups import FiniteGroup, group_from_json, make_cover, make_group
from .cocycle import cocycle_from_json, lifting_obstruction
from .constructions import (
    build_construction,
    check_compat_finite,
    check_compat_sl2,
    compat_mask,
    parse_trace,
    verify_proposition,
)
from .dihedral import DihedralTuple, check_conditions, normalize, random_tuple, replay_log
from .errors import BudgetExceeded, CompatError, InputError, UnsupportedCombination
from .reps.curves import PantsWords, sausage_words, theta_words
from .reps.enumeration import (
    SurfaceTuple,
    check_budget,
    default_budget,
    enumerate_epis,
    relator_lift_signs,
)
from .reps.orbits import canonical_codes, orbit_partition, replay, witness_map
from .topology.cutting import cutting_schedule, replay_matches
from .topology.cw import build_cw, validate_cw
from .topology.graphs import TrivalentGraph, necklace_graph, sausage_graph, theta_graph

SCHEMA = "compatpants.report/1"
EXIT_PASS, EXIT_FAIL, EXIT_INPUT, EXIT_BUDGET = 0, 1, 2, 3

DEFAULT_GROUPS = ("D3", "D4", "D5", "D6", "A4", "S4", "A5", "Q8")
DEFAULT_GENERA = (2, 3, 4)
DEFAULT_TYPES = ("square", "sausage")


@dataclass
class Outcome:
    result: Any
    passed: bool
    inputs: dict[str, str] = field(default_factory=dict)


# input helpers -----------------------------------------------------------------

def _read_json(path: str, inputs: dict[str, str]) -> Any:
    try:
        with open(path, "rb") as fh:
            raw = fh.read()
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc.strerror}") from None
    inputs[path] = hashlib.sha256(raw).hexdigest()
    try:
        data = json.loads(raw)
    except (json.JSONDecodeError, UnicodeDecodeError) as exc:
        raise InputError(f"{path} is not valid JSON: {exc}") from None
    # reports produced by this tool can be fed back in directly
    if isinstance(data, dict) and data.get("schema") == SCHEMA:
        if data.get("status") != "pass" or "result" not in data:
            raise InputError(f"{path} is a report without a usable result")
        data = data["result"]
    return data


def _group(ref: str, inputs: dict[str, str]) -> tuple[FiniteGroup, list[int] | None]:
    """A group given by name (``D4``, ``A5``, ``Q8``) or by a group file."""
    if os.path.exists(ref):
        data = _read_json(ref, inputs)
        if not isinstance(data, dict):
            raise InputError("group file must hold a JSON object")
        return group_from_json(data)
    try:
        return make_group(ref), None
    except (ValueError, KeyError) as exc:
        raise InputError(f"unknown group {ref!r}: {exc}") from None


def _pants_words(target: str, g: int) -> PantsWords:
    if target == "sausage":
        return sausage_words(g)
    if target == "square":
        if g != 2:
            raise UnsupportedCombination("square word data is only tabulated for genus 2")
        return theta_words()
    raise InputError(f"unknown target {target!r}")


def _tuple_from_json(data: Any, group: FiniteGroup, mapping: list[int] | None) -> SurfaceTuple:
    if not isinstance(data, dict) or "elements" not in data:
        raise InputError("representation file needs an 'elements' list")
    out = []
    for e in data["elements"]:
        if isinstance(e, str):
            out.append(group.element(e))
        elif isinstance(e, int) and not isinstance(e, bool):
            if mapping is not None:
                if not 0 <= e < len(mapping):
                    raise InputError("element reference outside the group file")
                e = mapping[e]
            out.append(e)
        else:
            raise InputError(f"bad element reference {e!r}")
    t = SurfaceTuple(group, tuple(out))
    if "genus" in data and data["genus"] != t.genus:
        raise InputError("genus does not match the number of elements")
    return t


# commands -------------------------------------------------------------------------

def cmd_graph_make(args) -> Outcome:
    makers: dict[str, Callable[[int], TrivalentGraph]] = {
        "sausage": sausage_graph, "square": necklace_graph, "theta": lambda g: theta_graph(),
    }
    graph = makers[args.type](args.genus)
    graph.validate()
    if args.cw:
        cw = build_cw(graph)
        validate_cw(cw)
        return Outcome(cw.to_json(), True)
    return Outcome(graph.to_json(), True)


def cmd_graph_cut_schedule(args) -> Outcome:
    inputs: dict[str, str] = {}
    graph = TrivalentGraph.from_json(_read_json(args.input, inputs))
    graph.validate()
    sched = cutting_schedule(graph)
    ok = replay_matches(graph, sched)
    return Outcome({"schedule": sched.to_json(), "replay_matches": ok}, ok, inputs)


def cmd_graph_cw(args) -> Outcome:
    inputs: dict[str, str] = {}
    graph = TrivalentGraph.from_json(_read_json(args.input, inputs))
    graph.validate()
    cw = build_cw(graph)
    validate_cw(cw)
    return Outcome(cw.to_json(), True, inputs)


def cmd_group_show(args) -> Outcome:
    group, _ = _group(args.group, {})
    return Outcome(group.to_json(), True)


def cmd_construct(args) -> Outcome:
    group, _ = _group(args.group, {})
    c = build_construction(group, args.genus, args.type, args.lift)
    return Outcome(c.to_json(), True)


def cmd_epi_enum(args) -> Outcome:
    group, _ = _group(args.group, {})
    epis = enumerate_epis(group, args.genus, args.budget)
    result: dict[str, Any] = {"group": group.label, "genus": args.genus, "count": int(len(epis))}
    if not group.in_su2:
        signs = relator_lift_signs(epis, make_cover(group))
        result["lift_signs"] = {"+1": int((signs == 1).sum()), "-1": int((signs == -1).sum())}
    if args.limit:
        result["first"] = [[group.name_of(int(x)) for x in row] for row in epis[: args.limit]]
    return Outcome(result, True)


def _orbit_summary(group: FiniteGroup, g: int, target: str | None, budget: int | None):
    check_budget(group, g, budget)
    epis = enumerate_epis(group, g, budget)
    part = orbit_partition(group, epis, budget=budget or 2_000_000)
    codes = canonical_codes(group, epis)
    signs = relator_lift_signs(epis, make_cover(group)) if not group.in_su2 else np.ones(len(epis), dtype=int)
    pw = _pants_words(target, g) if target else None
    mask = compat_mask(group, epis, pw) if pw else None
    rows = []
    for orb, size in zip(part.orbits, part.sizes):
        sel = np.isin(codes, orb)
        row = {
            "classes": int(len(orb)),
            "tuples": int(size),
            "lift_signs": sorted({int(s) for s in signs[sel]}),
        }
        if mask is not None:
            row["compatible_tuples"] = int(mask[sel].sum())
        rows.append(row)
    return epis, part, rows, pw


def cmd_orbit_bfs(args) -> Outcome:
    group, _ = _group(args.group, {})
    _, part, rows, _ = _orbit_summary(group, args.genus, args.target, args.budget)
    separated = all(len(r["lift_signs"]) == 1 for r in rows)
    result = {"group": group.label, "genus": args.genus, "target": args.target,
              "orbit_count": part.count, "orbits": rows, "separated_by_lift_sign": separated}
    return Outcome(result, True)


def cmd_theorem_check(args) -> Outcome:
    group, _ = _group(args.group, {})
    g = args.genus
    epis, part, rows, pw = _orbit_summary(group, g, args.target, args.budget)
    assert pw is not None
    wm = witness_map(group, epis, lambda t: compat_mask(group, t, pw), budget=args.budget or 2_000_000)
    codes = np.unique(canonical_codes(group, epis))
    unreached = [int(c) for c in codes if int(c) not in wm.distance]
    replay_failures = 0
    lengths = []
    for c in codes.tolist():
        if c not in wm.distance:
            continue
        start, path = wm.path(c)
        end = replay(group, start, path, g)
        if not compat_mask(group, np.array([end]), pw)[0]:
            replay_failures += 1
        lengths.append(len(path))
    sample = None
    if len(codes):
        start, path = wm.path(int(codes[-1])) if int(codes[-1]) in wm.distance else (None, None)
        if start is not None:
            sample = {"start": [group.name_of(x) for x in start], "path": path,
                      "end": [group.name_of(x) for x in replay(group, start, path, g)]}
    for row, orb in zip(rows, part.orbits):
        row["max_witness_length"] = max((wm.distance[int(c)] for c in orb if int(c) in wm.distance), default=None)
    ok = not unreached and replay_failures == 0
    result = {
        "group": group.label, "genus": g, "target": args.target,
        "classes": int(len(codes)), "orbit_count": part.count, "orbits": rows,
        "unreached_classes": len(unreached), "replay_failures": replay_failures,
        "max_witness_length": max(lengths, default=0), "sample_witness": sample,
        "all_reach_compatibility": ok,
    }
    return Outcome(result, ok)


def cmd_lift_check(args) -> Outcome:
    inputs: dict[str, str] = {}
    group, mapping = _group(args.group, inputs)
    if group.in_su2:
        raise InputError(f"{group.label} is already in SU(2); nothing to lift")
    c = cocycle_from_json(_read_json(args.cocycle, inputs), group, mapping)
    eps = lifting_obstruction(c, make_cover(group))
    result = {"group": group.label, "genus": c.cw.graph.genus, "epsilon": eps, "lifts": eps == 1}
    ok = True
    if args.expect is not None:
        result["expected"] = args.expect
        ok = eps == args.expect
    return Outcome(result, ok, inputs)


def cmd_compat_check(args) -> Outcome:
    inputs: dict[str, str] = {}
    if args.sl2:
        data = _read_json(args.traces, inputs)
        if not isinstance(data, dict) or "curves" not in data or "pants" not in data:
            raise InputError("trace file needs 'curves' and 'pants'")
        curves = [parse_trace(x) for x in data["curves"]]
        pants = [[parse_trace(x) for x in tri] for tri in data["pants"]]
        tol = float(data.get("tolerance", 1e-9))
        rep = check_compat_sl2(curves, pants, tol)
        return Outcome(rep.to_json(), rep.compatible is True, inputs)
    group, mapping = _group(args.group, inputs)
    if args.cocycle:
        c = cocycle_from_json(_read_json(args.cocycle, inputs), group, mapping)
        rep = check_compat_finite(c)
    elif args.rep:
        t = _tuple_from_json(_read_json(args.rep, inputs), group, mapping)
        rep = check_compat_finite(t, pants_words=_pants_words(args.target, t.genus))
    else:
        raise InputError("give --cocycle or --rep (or --sl2 --traces)")
    return Outcome(rep.to_json(), bool(rep.compatible), inputs)


def cmd_dihedral_normalize(args) -> Outcome:
    inputs: dict[str, str] = {}
    data = _read_json(args.rep, inputs)
    if not isinstance(data, dict):
        raise InputError("representation file must hold a JSON object")
    t = DihedralTuple.from_json(data)
    res = normalize(t)
    ok = replay_log(t, res.log) == res.tuple and res.report.passed
    out = res.to_json()
    out["replay_matches"] = ok
    return Outcome(out, ok, inputs)


def cmd_dihedral_random(args) -> Outcome:
    rng = random.Random(args.seed)
    return Outcome(random_tuple(args.genus, rng).to_json(), True)


def cmd_dihedral_campaign(args) -> Outcome:
    rng = random.Random(args.seed)
    failures = []
    lengths = []
    for i in range(args.count):
        g = rng.choice(args.genera)
        t = random_tuple(g, rng)
        res = normalize(t)
        if not (res.report.passed and replay_log(t, res.log) == res.tuple
                and check_conditions(res.tuple).passed):
            failures.append(i)
        lengths.append(len(res.log))
    result = {"count": args.count, "seed": args.seed, "failures": failures,
              "max_log_length": max(lengths, default=0)}
    return Outcome(result, not failures)


def _verify_one(job: tuple[str, int, str, str]) -> dict:
    name, g, kind, lift = job
    group = make_group(name)
    try:
        return verify_proposition(group, g, kind, lift).to_json()
    except UnsupportedCombination as exc:
        return {"group": group.label, "genus": g, "type": kind, "lift": lift,
                "passed": None, "reason": f"UnsupportedCombination: {exc}"}


def cmd_verify_props(args) -> Outcome:
    group, _ = _group(args.group, {})
    rep = verify_proposition(group, args.genus, args.type, args.lift)
    return Outcome(rep.to_json(), rep.passed)


def _matrix(args, inputs: dict[str, str]) -> list[tuple[str, int, str, str]]:
    groups, genera, types = list(DEFAULT_GROUPS), list(DEFAULT_GENERA), list(DEFAULT_TYPES)
    if args.config:
        cfg = _read_json(args.config, inputs)
        if not isinstance(cfg, dict):
            raise InputError("config must be a JSON object")
        groups = list(cfg.get("groups", groups))
        genera = [int(x) for x in cfg.get("genera", genera)]
        types = list(cfg.get("types", types))
        lifts = cfg.get("lifts")
    else:
        lifts = None
    for t in types:
        if t not in DEFAULT_TYPES:
            raise InputError(f"unknown decomposition type {t!r}")
    jobs = []
    for name in groups:
        group, _ = _group(name, {})
        choices = ["n/a"] if group.in_su2 else list(lifts or ("yes", "no"))
        for g in genera:
            for kind in types:
                for lift in choices:
                    jobs.append((name, g, kind, lift))
    return jobs


def cmd_verify_all(args) -> Outcome:
    inputs: dict[str, str] = {}
    jobs = _matrix(args, inputs)
    if args.jobs > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(max_workers=args.jobs) as pool:
            reports = list(pool.map(_verify_one, jobs))
    else:
        reports = [_verify_one(j) for j in jobs]
    unsupported = [r for r in reports if r["passed"] is None]
    failed = [r for r in reports if r["passed"] is False]
    result = {
        "runs": reports,
        "total": len(reports),
        "passed": sum(1 for r in reports if r["passed"] is True),
        "failed": [f"{r['group']} g={r['genus']} {r['type']} lift={r['lift']}" for r in failed],
        "unsupported": [f"{r['group']} g={r['genus']} {r['type']} lift={r['lift']}" for r in unsupported],
    }
    return Outcome(result, not failed, inputs)


# parser ------------------------------------------------------------------------------

def _add_common(p: argparse.ArgumentParser) -> None:
    p.add_argument("--out", help="write the report here instead of stdout")
    p.add_argument("--format", choices=["json"], default="json")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--budget", type=int, default=None,
                   help="search budget (default from COMPATPANTS_BUDGET or built-in)")
    p.add_argument("--timings", action="store_true", help="include wall-clock timings")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="compatpants", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=__version__)
    top = parser.add_subparsers(dest="area", required=True)

    def leaf(sub, name: str, fn, help_: str) -> argparse.ArgumentParser:
        p = sub.add_parser(name, help=help_)
        _add_common(p)
        p.set_defaults(func=fn)
        return p

    graph = top.add_parser("graph", help="dual graphs and cell complexes").add_subparsers(dest="cmd", required=True)
    p = leaf(graph, "make", cmd_graph_make, "build a standard dual graph")
    p.add_argument("--type", choices=["sausage", "square", "theta"], required=True)
    p.add_argument("--genus", type=int, default=2)
    p.add_argument("--cw", action="store_true", help="emit the cell complex instead")
    p = leaf(graph, "cut-schedule", cmd_graph_cut_schedule, "cutting schedule for a graph file")
    p.add_argument("--in", dest="input", required=True)
    p = leaf(graph, "cw", cmd_graph_cw, "cell complex for a graph file")
    p.add_argument("--in", dest="input", required=True)

    grp = top.add_parser("group", help="finite groups").add_subparsers(dest="cmd", required=True)
    p = leaf(grp, "show", cmd_group_show, "write a group file")
    p.add_argument("--group", required=True)

    p = leaf(top, "construct", cmd_construct, "write an explicit construction cocycle")
    p.add_argument("--group", required=True)
    p.add_argument("--genus", type=int, required=True)
    p.add_argument("--type", choices=DEFAULT_TYPES, required=True)
    p.add_argument("--lift", choices=["yes", "no", "n/a"], default="yes")

    epi = top.add_parser("epi", help="epimorphism enumeration").add_subparsers(dest="cmd", required=True)
    p = leaf(epi, "enum", cmd_epi_enum, "count surjections")
    p.add_argument("--group", required=True)
    p.add_argument("--genus", type=int, required=True)
    p.add_argument("--limit", type=int, default=0, help="also list the first N tuples")

    orbit = top.add_parser("orbit", help="mapping class group orbits").add_subparsers(dest="cmd", required=True)
    p = leaf(orbit, "bfs", cmd_orbit_bfs, "partition epimorphism classes into orbits")
    p.add_argument("--group", required=True)
    p.add_argument("--genus", type=int, required=True)
    p.add_argument("--target", choices=DEFAULT_TYPES, default=None)

    lift = top.add_parser("lift", help="SU(2) lifting obstruction").add_subparsers(dest="cmd", required=True)
    p = leaf(lift, "check", cmd_lift_check, "lifting sign of a cocycle")
    p.add_argument("--cocycle", required=True)
    p.add_argument("--group", required=True, help="group name or group file")
    p.add_argument("--expect", type=int, choices=[1, -1], default=None)

    compat = top.add_parser("compat", help="compatibility checks").add_subparsers(dest="cmd", required=True)
    p = leaf(compat, "check", cmd_compat_check, "check a cocycle, tuple or trace data")
    mode = p.add_mutually_exclusive_group()
    mode.add_argument("--sl2", action="store_true")
    mode.add_argument("--finite", action="store_true")
    p.add_argument("--traces")
    p.add_argument("--group")
    p.add_argument("--cocycle")
    p.add_argument("--rep")
    p.add_argument("--target", choices=DEFAULT_TYPES, default="sausage")

    dih = top.add_parser("dihedral", help="dihedral SL2 representations").add_subparsers(dest="cmd", required=True)
    p = leaf(dih, "normalize", cmd_dihedral_normalize, "normalize a dihedral tuple")
    p.add_argument("--rep", required=True)
    p = leaf(dih, "random", cmd_dihedral_random, "random exact input")
    p.add_argument("--genus", type=int, default=2)
    p = leaf(dih, "campaign", cmd_dihedral_campaign, "normalize many random inputs")
    p.add_argument("--count", type=int, default=200)
    p.add_argument("--genera", type=int, nargs="+", default=[2, 3])

    ver = top.add_parser("verify", help="construction campaigns").add_subparsers(dest="cmd", required=True)
    p = leaf(ver, "props", cmd_verify_props, "verify one construction")
    p.add_argument("--group", required=True)
    p.add_argument("--genus", type=int, required=True)
    p.add_argument("--type", choices=DEFAULT_TYPES, required=True)
    p.add_argument("--lift", choices=["yes", "no", "n/a"], default="yes")
    p = leaf(ver, "all", cmd_verify_all, "verify a matrix of constructions")
    p.add_argument("--config", help="JSON with groups, genera, types, lifts")
    p.add_argument("--jobs", type=int, default=1)

    thm = top.add_parser("theorem", help="exhaustive desk checks").add_subparsers(dest="cmd", required=True)
    p = leaf(thm, "check", cmd_theorem_check, "every class reaches a compatible tuple")
    p.add_argument("--group", required=True)
    p.add_argument("--genus", type=int, default=2)
    p.add_argument("--target", choices=DEFAULT_TYPES, required=True)
    return parser


def _command_echo(args) -> dict:
    skip = {"func", "out", "timings", "format"}
    echo = {k: v for k, v in vars(args).items() if k not in skip and v is not None and v is not False}
    return echo


def _emit(payload: dict, out: str | None) -> None:
    text = json.dumps(payload, sort_keys=True, indent=2) + "\n"
    if out:
        with open(out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.budget is None and args.area in ("epi", "orbit", "theorem"):
        try:
            args.budget = default_budget()
        except InputError as exc:
            _emit({"schema": SCHEMA, "version": __version__, "status": "input_error", "error": str(exc)}, None)
            return EXIT_INPUT
    payload: dict[str, Any] = {"schema": SCHEMA, "version": __version__, "command": _command_echo(args)}
    start = time.perf_counter()
    try:
        outcome = args.func(args)
    except BudgetExceeded as exc:
        payload.update(status="budget_exceeded", error=str(exc))
        code = EXIT_BUDGET
    except (InputError, UnsupportedCombination) as exc:
        payload.update(status="input_error", error=f"{type(exc).__name__}: {exc}")
        code = EXIT_INPUT
    except CompatError as exc:
        payload.update(status="check_failed", error=f"{type(exc).__name__}: {exc}")
        code = EXIT_FAIL
    else:
        payload.update(status="pass" if outcome.passed else "check_failed",
                       result=outcome.result, inputs=outcome.inputs)
        code = EXIT_PASS if outcome.passed else EXIT_FAIL
    if args.timings:
        payload["timings"] = {"seconds": round(time.perf_counter() - start, 6)}
    _emit(payload, args.out)
    return code


if __name__ == "__main__":
    sys.exit(main())

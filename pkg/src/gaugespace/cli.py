"""Command-line front end.

Every command prints a short human-readable report; ``--json`` prints the
machine-readable report instead and ``--out`` writes it to a file.  Exit
codes: 0 when every checked property holds, 1 when one fails (the report
carries a witness), 2 for input errors.
"""
from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

import numpy as np

from . import spacefile as sf
from .compactify import (CompletenessSlackError, EvaluationDatum, ExhaustionChain, FunctionDict,
                         LocatednessError, TailChain, TargetNotReachable, cauchy_from_evaluation,
                         enumerate_ultrafilters, evaluate_point, extend_map, extension_entries,
                         infinity_profile, one_point_gauge, refine_datum, stone_cech_gauge, tail_datum,
                         validate_datum)
from .completion import (complete_space, deleted_point_profile, represent_point,
                         validate_cauchy_point)
from .covers import cover_profile, greedy_net
from .gauges import is_separated
from .metrics import ROUNDOFF, InputError, ToleranceProfile, ball, distance_to_set, restrict, validate_metric
from .relations import (MapTable, check_continuity, check_uniform_continuity, real_valued_map,
                        topologically_equivalent)


class PropertyFailure(Exception):
    """Raised inside a command once its report is final and a property failed."""


# --------------------------------------------------------------------------
# report plumbing


def _clean(obj):
    if isinstance(obj, bool) or obj is None or isinstance(obj, str):
        return obj
    if isinstance(obj, (int, np.integer)):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        return sf.real(obj)
    if isinstance(obj, dict):
        return {_key(k): _clean(v) for k, v in obj.items()}
    if isinstance(obj, (frozenset, set)):
        return sorted((_clean(v) for v in obj), key=lambda v: (str(type(v)), str(v)))
    if isinstance(obj, (list, tuple, np.ndarray)):
        return [_clean(v) for v in obj]
    return str(obj)


def _key(k) -> str:
    if isinstance(k, tuple):
        return "|".join(_key(p) for p in k)
    if isinstance(k, float):
        return sf.real(k)
    return str(k)


def _render(report: dict) -> str:
    lines = []
    for k, v in report.items():
        if isinstance(v, (dict, list)) and len(json.dumps(v)) > 100:
            lines.append(f"{k}:")
            items = v.items() if isinstance(v, dict) else enumerate(v)
            for kk, vv in items:
                lines.append(f"  {kk}: {json.dumps(vv, sort_keys=True)}")
        else:
            lines.append(f"{k}: {v if isinstance(v, str) else json.dumps(v, sort_keys=True)}")
    return "\n".join(lines)


def _tol(args, bundle=None) -> ToleranceProfile:
    base = bundle.tolerances if bundle is not None else ToleranceProfile()
    slack = base.slack if args.slack is None else args.slack
    grid = base.epsilon_grid if args.eps_grid is None else args.eps_grid
    try:
        return ToleranceProfile(slack, tuple(grid))
    except ValueError as e:
        raise InputError(str(e)) from None


def _point(space, text):
    """Resolve a command-line point id against the space's ids."""
    for p in space.ids:
        if str(p) == text:
            return p
    raise InputError(f"unknown point id {text!r}")


def _map(bundle, name, target_path):
    if name not in bundle.maps:
        raise InputError(f"unknown map {name!r}")
    spec = bundle.maps[name]
    if "values" in spec:
        f, gY = real_valued_map(bundle.space, spec["values"])
        return f, gY
    if target_path is None:
        raise InputError(f"map {name!r} needs --target")
    target = sf.load_space(target_path)
    assign = {}
    for p, q in zip(bundle.space.ids, spec["image"]):
        if q not in target.space:
            raise InputError(f"map {name!r} sends {p!r} to unknown target point {q!r}")
        assign[p] = q
    return MapTable(bundle.space, target.space, assign), target.gauge


# --------------------------------------------------------------------------
# commands


def cmd_validate(args, rep):
    b = sf.load_space(args.space)
    tol = _tol(args, b)
    metrics = {}
    ok = True
    for mid, t in b.metrics.items():
        r = validate_metric(t)
        ok &= r.valid
        metrics[mid] = {"valid": r.valid, "roundoff": len(r.roundoff),
                        "violations": [(v.axiom, [t.space.ids[i] for i in v.witness]) for v in r.violations[:5]]}
    sep = is_separated(b.gauge, tol.slack)
    rep.update(points=len(b.space), metrics=metrics, gauge_members=list(b.gauge.ids),
               separated=sep.separated, separation_witness=sep.witness)
    if not ok:
        raise PropertyFailure


def cmd_equiv(args, rep):
    b = sf.load_space(args.space)
    tol = _tol(args, b)
    if args.left or args.right:
        pairs = [(args.left, args.right)]
    else:
        names = sorted(b.gauges)
        if len(names) < 2:
            raise InputError("name two gauges with --left and --right")
        pairs = [(a, c) for i, a in enumerate(names) for c in names[i + 1:]]
    results = {}
    failed = False
    for a, c in pairs:
        v = topologically_equivalent(b.named_gauge(a), b.named_gauge(c), tol)
        results[f"{a or 'gauge'}~{c or 'gauge'}"] = {"equivalent": v.equivalent, "witness": v.witness}
        failed |= not v.equivalent
    rep.update(epsilon_grid=tol.epsilon_grid, results=results)
    if failed:
        raise PropertyFailure


def _continuity_report(rep, v):
    rep.update(continuous=v.continuous, floors=v.floors, certificates=v.certificates,
               counterexamples=v.counterexamples)
    if not v.continuous:
        raise PropertyFailure


def _delta_rule(args):
    return None if args.delta_factor is None else (lambda e, c=args.delta_factor: c * e)


def cmd_continuity(args, rep):
    b = sf.load_space(args.space)
    tol = _tol(args, b)
    f, gY = _map(b, args.map, args.target)
    x = _point(b.space, args.point)
    rep.update(point=x, epsilon_grid=tol.epsilon_grid)
    _continuity_report(rep, check_continuity(f, b.named_gauge(args.gauge), gY, x, tol, _delta_rule(args)))


def cmd_ucontinuity(args, rep):
    b = sf.load_space(args.space)
    tol = _tol(args, b)
    f, gY = _map(b, args.map, args.target)
    rep.update(epsilon_grid=tol.epsilon_grid)
    _continuity_report(rep, check_uniform_continuity(f, b.named_gauge(args.gauge), gY, tol, _delta_rule(args)))


def cmd_cover(args, rep):
    b = sf.load_space(args.space)
    tol = _tol(args, b)
    g = b.named_gauge(args.gauge)
    prof = cover_profile(g, tol)
    rep.update(epsilon_grid=tol.epsilon_grid, cover_numbers=prof,
               centers={(d.id, e): greedy_net(d, e).centers for d in g.members for e in tol.epsilon_grid})


def cmd_complete(args, rep):
    b = sf.load_space(args.space)
    g = b.named_gauge(args.gauge)
    deleted = [_point(b.space, t) for t in args.delete]
    if len(set(deleted)) != len(deleted):
        raise InputError("a point is deleted twice")
    keep = [p for p in b.space.ids if p not in set(deleted)]
    if not keep:
        raise InputError("cannot delete every point")
    sub = g.restricted(keep)
    cands = [deleted_point_profile(g, y, sub) for y in deleted]
    needed = max((float(xi[d.id].min()) for xi in cands for d in sub.members), default=0.0)
    slack = needed if args.slack is None else args.slack
    done = complete_space(sub, cands, slack)
    order = [done.embedding[p] for p in b.space.ids]
    worst = None
    if len(set(order)) == len(order):
        idx = done.space.indices(order)
        for d in g.members:
            diff = np.abs(done.gauge[d.id].values[np.ix_(idx, idx)] - d.values)
            if diff.max() > ROUNDOFF:
                i, j = np.unravel_index(int(np.argmax(diff)), diff.shape)
                worst = (d.id, (b.space.ids[i], b.space.ids[j]), float(d.values[i, j]),
                         float(done.gauge[d.id].values[idx[i], idx[j]]))
                break
        restored = worst is None
    else:
        restored = False
        worst = ("merged", [p for p in b.space.ids if order.count(done.embedding[p]) > 1])
    sep = is_separated(done.gauge, 0.0)
    rep.update(deleted=deleted, slack=slack, completed_points=len(done.space), adjoined=done.adjoined,
               embedding=done.embedding, restores_ambient=restored, mismatch=worst,
               separated=sep.separated, separation_witness=sep.witness)
    if not (restored and sep.separated):
        raise PropertyFailure


def cmd_onepoint(args, rep):
    b = sf.load_space(args.space)
    tol = _tol(args, b)
    g = b.named_gauge(args.gauge)
    if args.chain not in b.chains or b.chains[args.chain][0] != "exhaustion":
        raise InputError(f"no exhaustion chain named {args.chain!r}")
    chain = ExhaustionChain(b.space, b.chains[args.chain][1])
    opg = one_point_gauge(g, chain)
    invalid = [m.id for m in opg.members if not validate_metric(m).valid]
    ball_fail = None
    cover_fail = None
    for d in g.members:
        for j, K in enumerate(chain.subsets):
            dK = opg[f"{d.id}|K{j + 1}"]
            outside = distance_to_set(d, chain.complement(j))
            Kids = [p for p in b.space.ids if p in K]
            dKres = restrict(d, Kids)
            for eps in tol.epsilon_grid:
                if ball_fail is None:
                    for i in np.nonzero(outside >= eps)[0]:
                        x = b.space.ids[i]
                        if ball(dK, x, eps) != ball(d, x, eps):
                            ball_fail = (dK.id, x, eps)
                            break
                nK = len(greedy_net(dK, eps))
                nres = len(greedy_net(dKres, eps))
                if cover_fail is None and nK > nres + 1:
                    cover_fail = (dK.id, eps, nK, nres)
    inf = infinity_profile(g, chain, opg)
    ok_inf = validate_cauchy_point(inf, 0.0)
    rep.update(members=list(opg.ids), invalid_members=invalid, interior_balls_equal=ball_fail is None,
               ball_witness=ball_fail, cover_bound=cover_fail is None, cover_witness=cover_fail,
               infinity_profile_valid=ok_inf.valid, infinity_violation=ok_inf.first(),
               cover_numbers=cover_profile(opg, tol))
    if invalid or ball_fail or cover_fail or not ok_inf.valid:
        raise PropertyFailure


def _datum(b, fdict, name):
    if name is None:
        return EvaluationDatum.full(fdict)
    if name not in b.data:
        raise InputError(f"unknown datum {name!r}")
    iv = dict(b.data[name])
    for k in fdict.ids:
        iv.setdefault(k, (0.0, 1.0))
    return EvaluationDatum(iv)


def cmd_refine(args, rep):
    b = sf.load_space(args.space)
    fdict = b.function_dict()
    slack = 0.0 if args.slack is None else args.slack
    J = _datum(b, fdict, args.datum)
    v = validate_datum(J, fdict, slack)
    rep.update(input_valid=v.valid, witness=v.witness, violating_family=v.family)
    if not v.valid:
        raise PropertyFailure
    R = refine_datum(J, fdict, args.width_tol, slack)
    rep.update(width_tol=args.width_tol, intervals=R.intervals, values=R.midpoints(),
               nested=J.contains(R), output_valid=validate_datum(R, fdict, slack).valid)


def cmd_evaluate(args, rep):
    b = sf.load_space(args.space)
    tol = _tol(args, b)
    fdict = b.function_dict()
    sg = stone_cech_gauge(fdict)
    if args.point is not None:
        xi = represent_point(sg, _point(b.space, args.point))
    else:
        J = _datum(b, fdict, args.datum)
        try:
            xi = cauchy_from_evaluation(J.midpoints(), sg, tol.slack)
        except LocatednessError as e:
            rep.update(located=False, violating_family=e.family, reason=str(e))
            raise PropertyFailure
    out = {}
    for k in fdict.ids:
        try:
            ev = evaluate_point(xi, k, tol)
        except LocatednessError as e:
            rep.update(located=False, entry=k, eps=e.eps, reason=str(e))
            raise PropertyFailure
        out[k] = {"value": ev.value, "brackets": ev.brackets}
    rep.update(located=True, slack=tol.slack, evaluations=out)


def cmd_extend(args, rep):
    b = sf.load_space(args.space)
    tol = _tol(args, b)
    if args.map not in b.maps or "image" not in b.maps[args.map]:
        raise InputError(f"no point map named {args.map!r}")
    gmap, gY = _map(b, args.map, args.target)
    entries = dict(b.functions)
    entries.update(extension_entries(gmap, gY))
    fdict = FunctionDict(b.space, entries, b.stacks)
    sg = stone_cech_gauge(fdict)
    if args.point is not None:
        x = _point(b.space, args.point)
        xi = represent_point(sg, x)
        source = {"point": x}
    else:
        if args.tail is not None:
            if args.tail not in b.chains or b.chains[args.tail][0] != "tail":
                raise InputError(f"no tail chain named {args.tail!r}")
            J = tail_datum(TailChain(b.space, b.chains[args.tail][1]), fdict)
        else:
            J = _datum(b, fdict, args.datum)
        if not validate_datum(J, fdict, 0.0).valid:
            raise InputError("datum is not valid")
        R = refine_datum(J, fdict, 0.0)
        xi = cauchy_from_evaluation(R.midpoints(), sg, 0.0)
        source = {"tail": args.tail} if args.tail is not None else {"datum": args.datum}
    try:
        y = extend_map(gmap, gY, xi, tol.slack, tol=tol)
    except TargetNotReachable as e:
        rep.update(source=source, reason=str(e))
        raise PropertyFailure
    except CompletenessSlackError as e:
        rep.update(source=source, reason=str(e), best=e.best, excess=e.excess)
        raise PropertyFailure
    rep.update(source=source, slack=tol.slack, target_point=y)
    if args.point is not None:
        gx = gmap(source["point"])
        dist = {d.id: d(y, gx) for d in gY.members}
        rep.update(image_of_point=gx, distance=dist)
        if max(dist.values()) > tol.slack + ROUNDOFF:
            raise PropertyFailure


def cmd_ultrafilters(args, rep):
    us = enumerate_ultrafilters(args.n)
    pts = [u.principal_point for u in us]
    rep.update(n=args.n, count=len(us), principal_points=pts,
               ultrafilters=[sorted(sorted(s) for s in u.member_sets) for u in us])
    if len(us) != args.n or sorted(p for p in pts if p is not None) != list(range(1, args.n + 1)):
        raise PropertyFailure


def cmd_corpus(args, rep):
    gen = sf.CORPUS[args.kind]
    nums = [float(a) if "." in a or "e" in a.lower() else int(a) for a in args.params]
    try:
        doc = gen(*nums)
    except TypeError:
        raise InputError(f"wrong parameters for {args.kind}") from None
    sf.from_doc(doc)
    text = sf.dumps_doc(doc)
    if args.file:
        Path(args.file).write_text(text)
        rep.update(kind=args.kind, params=nums, written=args.file, points=len(doc["points"]["ids"]))
    else:
        rep["__raw__"] = text


# --------------------------------------------------------------------------
# parser


def _grid(text):
    try:
        return tuple(float(t) for t in text.split(","))
    except ValueError:
        raise argparse.ArgumentTypeError(f"bad epsilon grid {text!r}") from None


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--slack", type=float, default=None, help="how close to zero counts as zero")
    common.add_argument("--eps-grid", type=_grid, default=None, help="comma-separated decreasing epsilons")
    common.add_argument("--width-tol", type=float, default=0.0, help="target interval width for refinement")
    common.add_argument("--out", default=None, help="write the JSON report here")
    common.add_argument("--json", action="store_true", help="print the JSON report")

    p = argparse.ArgumentParser(prog="gaugespace", description="Finite-sample gauge space checks.")
    sub = p.add_subparsers(dest="command", required=True)

    def add(name, fn, help, space=True):
        q = sub.add_parser(name, parents=[common], help=help)
        if space:
            q.add_argument("space", help="space file (JSON)")
        q.set_defaults(fn=fn)
        return q

    add("validate", cmd_validate, "check every metric and report separation")
    q = add("equiv", cmd_equiv, "topological equivalence of named gauges")
    q.add_argument("--left")
    q.add_argument("--right")
    for name, fn, what in (("continuity", cmd_continuity, "pointwise continuity of a map"),
                           ("ucontinuity", cmd_ucontinuity, "uniform continuity of a map")):
        q = add(name, fn, what)
        q.add_argument("--map", required=True)
        q.add_argument("--target", help="space file of the map's codomain")
        q.add_argument("--gauge", help="named domain gauge")
        q.add_argument("--delta-factor", type=float, help="verify delta = factor * eps")
        if name == "continuity":
            q.add_argument("--point", required=True)
    q = add("cover", cmd_cover, "greedy cover numbers")
    q.add_argument("--gauge")
    q = add("complete", cmd_complete, "delete points and complete with their profiles")
    q.add_argument("--delete", nargs="+", required=True)
    q.add_argument("--gauge")
    q = add("onepoint", cmd_onepoint, "one-point gauge checks for an exhaustion chain")
    q.add_argument("--chain", required=True)
    q.add_argument("--gauge")
    q = add("stonecech-refine", cmd_refine, "refine an evaluation datum by bisection")
    q.add_argument("--datum")
    q = add("stonecech-evaluate", cmd_evaluate, "evaluate the dictionary at a point or datum")
    g = q.add_mutually_exclusive_group()
    g.add_argument("--datum")
    g.add_argument("--point")
    q = add("extend", cmd_extend, "extend a point map to Stone-Čech points")
    q.add_argument("--target", required=True)
    q.add_argument("--map", required=True)
    g = q.add_mutually_exclusive_group(required=True)
    g.add_argument("--point")
    g.add_argument("--datum")
    g.add_argument("--tail")
    q = add("ultrafilters", cmd_ultrafilters, "enumerate ultrafilters on {1..n}", space=False)
    q.add_argument("n", type=int)
    q = add("corpus", cmd_corpus, "generate a space file", space=False)
    q.add_argument("kind", choices=sorted(sf.CORPUS))
    q.add_argument("params", nargs="*", help="generator parameters")
    q.add_argument("--file", help="write the space file here (default stdout)")
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    rep = {"command": args.command}
    code = 0
    try:
        args.fn(args, rep)
        rep["verdict"] = "pass"
    except PropertyFailure:
        rep["verdict"] = "fail"
        code = 1
    except InputError as e:
        rep["verdict"] = "error"
        rep["error"] = str(e)
        code = 2
    raw = rep.pop("__raw__", None)
    if raw is not None and code == 0:
        sys.stdout.write(raw)
        return 0
    clean = _clean(rep)
    text = json.dumps(clean, sort_keys=True, indent=1) + "\n"
    if args.out:
        Path(args.out).write_text(text)
    if args.json:
        sys.stdout.write(text)
    else:
        stream = sys.stderr if code == 2 else sys.stdout
        print(_render(clean), file=stream)
    return code


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())

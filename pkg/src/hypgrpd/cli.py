"""Batch command-line front end.

Every command prints one JSON report (or a DOT graph with ``--format dot``).
Exit status: 0 success, 1 a checked property failed, 2 bad input, 3 budget
exhausted.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import sys
from fractions import Fraction
from pathlib import Path

from . import germs, hypgraph, logscale, selfsim, smale
from .quadratic import QuadInt
from .words import EvPeriodicWord, as_word, word_str

SCHEMA = "hypgrpd/1"

EXIT_OK, EXIT_VIOLATION, EXIT_INPUT, EXIT_BUDGET = 0, 1, 2, 3


class _Run:
    def __init__(self, args: argparse.Namespace):
        self.args = args
        self.inputs: dict = {}
        self.budgets: dict = {}
        self.truncated = False
        self.failed = False
        self.dot: str | None = None

    def load(self, path: str):
        data = Path(path).read_bytes()
        self.inputs[path] = hashlib.sha256(data).hexdigest()
        return json.loads(data)

    def budget(self, **kw) -> None:
        self.budgets.update({k: v for k, v in kw.items() if v is not None})


def _jsonable(obj):
    if isinstance(obj, Fraction):
        return str(obj) if obj.denominator != 1 else obj.numerator
    if isinstance(obj, (set, frozenset, tuple)):
        return list(obj)
    if hasattr(obj, "to_json"):
        return obj.to_json()
    if hasattr(obj, "item"):
        return obj.item()
    return str(obj)


# ------------------------------------------------------------ shared inputs


def _graph(run: _Run):
    a = run.args
    if a.graph:
        data = run.load(a.graph)
        if "lambda" in data:
            return hypgraph.CocycleGraph.from_json(data)
        return hypgraph.Graph(data["vertices"], [tuple(e) for e in data["edges"]])
    run.budget(radius=a.radius)
    run.truncated = True
    return germs.preset_ball(a.preset, a.radius).graph


def _recursion(run: _Run) -> selfsim.WreathRecursion:
    a = run.args
    if a.recursion:
        return selfsim.WreathRecursion.from_json(run.load(a.recursion))
    if a.preset not in selfsim.PRESETS:
        raise ValueError(f"unknown group preset {a.preset!r}; choose from {sorted(selfsim.PRESETS)}")
    return selfsim.PRESETS[a.preset]()


def _sft(run: _Run) -> smale.SftSystem:
    a = run.args
    if a.sft:
        return smale.SftSystem.from_json(run.load(a.sft))
    if a.prohibited is not None:
        return smale.SftSystem(a.alphabet and list(a.alphabet), [tuple(w) for w in a.prohibited])
    presets = {"full": smale.full_shift, "golden-mean": smale.golden_mean_shift, "free-group": smale.free_group_sft}
    if a.preset not in presets:
        raise ValueError(f"unknown shift preset {a.preset!r}; choose from {sorted(presets)}")
    return presets[a.preset]()


def _adic(run: _Run) -> smale.AdicSystem:
    if run.args.adic:
        return smale.AdicSystem.from_json(run.load(run.args.adic))
    return smale.golden_adic()


# ------------------------------------------------------------ commands


def cmd_logscale_delta(run: _Run) -> dict:
    ls = logscale.LogScale.from_json(run.load(run.args.input))
    return {"points": len(ls.points), "delta": logscale.delta_of(ls)}


def cmd_logscale_metric(run: _Run) -> dict:
    ls = logscale.LogScale.from_json(run.load(run.args.input))
    delta = run.args.delta or max(1, logscale.delta_of(ls))
    m = logscale.metric_from_logscale(ls, delta)
    bad = logscale.frink_bounds_hold(ls, m, delta)
    tri = m.triangle_violations()
    run.failed = bool(bad or tri)
    return {"delta": delta, "metric": m, "bound_violations": bad, "triangle_violations": tri}


def cmd_paste(run: _Run) -> dict:
    data = run.load(run.args.input)
    locals_ = [logscale.LogScale.from_json(x) for x in data["locals"]]
    cover = [list(logscale._freeze(c)) for c in data["cover"]]
    out = logscale.paste_logscales(cover, locals_, int(data.get("overlap_bound", 0)))
    return {"level": logscale.pasting_level(cover, locals_), "logscale": out}


def cmd_delta(run: _Run) -> dict:
    g = _graph(run)
    base = g.vertices[0]
    return {"vertices": len(g), "basepoint": g.label(base), "four_point_delta": hypgraph.four_point_delta(g, base)}


def cmd_thin_delta(run: _Run) -> dict:
    a = run.args
    g = _graph(run)
    run.budget(samples=None if a.exhaustive else a.samples)
    exhaustive = a.exhaustive or len(g) <= hypgraph.EXHAUSTIVE_LIMIT
    val = hypgraph.thin_triangle_delta(g, exhaustive=a.exhaustive, samples=a.samples, seed=a.seed)
    run.truncated = run.truncated or not exhaustive
    return {"vertices": len(g), "thin_triangle_delta": val, "exhaustive": exhaustive}


def _descending_ray(cg: hypgraph.CocycleGraph, start: int) -> list:
    if not isinstance(cg, hypgraph.CocycleGraph):
        raise ValueError("this command needs a graph with a potential")
    ray = [start]
    while cg.successors[ray[-1]]:
        ray.append(min(cg.successors[ray[-1]]))
    return [cg.vertices[i] for i in ray]


def cmd_busemann(run: _Run) -> dict:
    a = run.args
    cg = _graph(run)
    ray = _descending_ray(cg, 0)
    x, y = cg.vertices[a.x], cg.vertices[a.y]
    lo, hi = hypgraph.busemann_estimate(cg, ray, x, y)
    return {"x": cg.label(x), "y": cg.label(y), "ray_length": len(ray), "estimate": [lo, hi], "spread": hi - lo}


def cmd_criterion(run: _Run) -> dict:
    a = run.args
    cg = _graph(run)
    run.budget(horizon=a.horizon, m=a.m)
    rep = hypgraph.convergence_criterion(cg, a.delta1 or cg.delta + cg.eta, a.m, a.horizon)
    run.failed = not rep.ok
    run.truncated = run.truncated or rep.truncated
    return rep.to_json()


def cmd_level_graph(run: _Run) -> dict:
    a = run.args
    cg = _graph(run)
    lg = hypgraph.build_level_graph(cg, a.delta2, a.r, a.rho1, a.k)
    checks = lg.check_geodesics()
    d1, d0 = lg.distortion()
    run.failed = bool(checks["descending_after_ascending"] or checks["long_horizontal_runs"])
    run.dot = lg.graph.to_dot("LevelGraph")
    return {"level_graph": lg, "geodesic_checks": checks, "distortion": [d1, d0], "bound": a.r * a.rho1}


def cmd_act(run: _Run) -> dict:
    rec = _recursion(run)
    g = rec.element(run.args.element)
    run.budget(budget=run.args.budget)
    out = selfsim.act(g, as_word(run.args.word), run.args.budget)
    run.truncated = isinstance(out, selfsim.TruncatedWord)
    return {"element": g.label(), "word": run.args.word, "image": str(out) if run.truncated else word_str(out)}


def cmd_section(run: _Run) -> dict:
    rec = _recursion(run)
    g = rec.element(run.args.element)
    return {"element": g.label(), "word": run.args.word, "section": selfsim.section(g, tuple(run.args.word)).label()}


def cmd_nucleus(run: _Run) -> dict:
    rec = _recursion(run)
    run.budget(budget=run.args.budget)
    res = selfsim.nucleus(rec, run.args.budget)
    if not res.ok:
        raise selfsim.BudgetExceeded(res.status)
    return res.to_json()


def cmd_schreier(run: _Run) -> dict:
    rec = _recursion(run)
    sg = selfsim.schreier_graph(rec, run.args.level)
    run.dot = sg.to_dot()
    return {"schreier": sg, "connected": sg.is_connected()}


def cmd_cayley(run: _Run) -> dict:
    a = run.args
    run.budget(radius=a.radius)
    ball = germs.preset_ball(a.preset, a.radius)
    run.truncated = True
    run.dot = ball.graph.to_dot("Cayley")
    check = germs.composable_pairs_check(ball)
    run.failed = bool(check["violations"])
    return {"ball": ball, "cocycle_check": check}


def cmd_preimage_tree(run: _Run) -> dict:
    spec, _ = germs.doubling()
    t = EvPeriodicWord.parse(run.args.word)
    run.budget(depth=run.args.depth)
    tree = germs.tree_of_preimages(spec, t, run.args.depth)
    run.dot = tree.to_dot("Preimages")
    return {"tree": tree, "leaves": germs.leaf_count(tree)}


def cmd_boundary_scale(run: _Run) -> dict:
    a = run.args
    run.budget(radius=a.radius)
    ball = germs.preset_ball("doubling", a.radius)
    r1 = germs.ascending_ray(ball, a.ray1)
    r2 = germs.ascending_ray(ball, a.ray2)
    res = germs.boundary_scale(ball, r1, r2)
    run.truncated = res.lower_bound
    return res.to_json()


def cmd_rotation_graph(run: _Run) -> dict:
    a = run.args
    spec, _ = germs.golden_rotation()
    run.budget(word_bound=a.word_bound, edge_span=a.edge_span)
    # theta = phi^2 in the golden ring, so phi = theta - 1
    shifts = [QuadInt.of(1, spec.b), spec.theta - 1]
    interval = (Fraction(a.interval[0]), Fraction(a.interval[1]))
    cg = germs.rotation_orbital_graph(
        spec, interval, a.word_bound, shifts, scaling=a.scaling, edge_span=a.edge_span
    )
    run.truncated = True
    run.dot = cg.to_dot("Rotation")
    out = {"graph": cg, "connected": cg.is_connected()}
    if cg.is_connected():
        out["diameter"] = germs.graph_diameter(cg)
    return out


def cmd_splice_check(run: _Run) -> dict:
    a = run.args
    s = _sft(run)
    if a.x and a.y:
        x, y = smale.BiSeq.parse(a.x), smale.BiSeq.parse(a.y)
        return {"splice": str(smale.splice(s, x, y))}
    seqs = smale.enumerate_biseqs(s, a.max_pre, a.max_period)
    run.budget(max_pre=a.max_pre, max_period=a.max_period)
    checked, bad = 0, []
    for x in seqs:
        chart = [y for y in seqs if y.window(0, s.memory) == x.window(0, s.memory)]
        if smale.splice(s, x, x) != x:
            bad.append([str(x)])
        for y in chart:
            xy = smale.splice(s, x, y)
            for z in chart:
                checked += 1
                xz = smale.splice(s, x, z)
                if smale.splice(s, x, smale.splice(s, y, z)) != xz or smale.splice(s, xy, z) != xz:
                    bad.append([str(x), str(y), str(z)])
    run.failed = bool(bad)
    return {"sequences": len(seqs), "triples_checked": checked, "violations": bad[:20]}


def cmd_fried(run: _Run) -> dict:
    a = run.args
    s = _sft(run)
    x, y = smale.BiSeq.parse(a.x), smale.BiSeq.parse(a.y)
    run.budget(horizon=a.horizon)
    val = smale.fried_logscale(s, x, y, a.horizon)
    run.truncated = val == a.horizon
    return {"x": str(x), "y": str(y), "logscale": val}


def cmd_dual_sft(run: _Run) -> dict:
    return smale.dual_sft(_sft(run)).to_json()


def cmd_duality_witness(run: _Run) -> dict:
    s = _sft(run)
    run.budget(horizon=run.args.horizon)
    rep = smale.duality_witness(s, run.args.horizon)
    run.failed = not rep.ok
    out = rep.to_json()
    out["reversal_invariant"] = smale.reversal_invariant(s)
    return out


def cmd_limit_space(run: _Run) -> dict:
    rec = _recursion(run)
    run.budget(level=run.args.level, budget=run.args.budget)
    try:
        gg = smale.limit_space_gluing(rec, run.args.level, run.args.budget)
    except smale.NotContracting as exc:
        raise selfsim.BudgetExceeded(str(exc)) from exc
    run.dot = gg.to_dot()
    out = gg.to_json()
    out["is_cycle"] = gg.is_cycle()
    return out


def cmd_gamma_graph(run: _Run) -> dict:
    rec = _recursion(run)
    run.budget(max_len=run.args.max_len)
    cg = smale.gamma_graph(rec, run.args.max_len)
    run.truncated = True
    run.dot = cg.to_dot("Gamma")
    return {"graph": cg, "four_point_delta": hypgraph.four_point_delta(cg, ())}


def _prefix(adic: smale.AdicSystem, text: str | None, n: int) -> tuple:
    if text:
        return tuple(text.split(",")) if "," in text else tuple(text)
    return adic.extreme_prefix(n, "min")


def cmd_vershik(run: _Run) -> dict:
    a = run.args
    adic = _adic(run)
    path = _prefix(adic, a.prefix, a.length)
    orbit = [path]
    stopped = None
    for _ in range(a.steps):
        try:
            orbit.append(smale.vershik_map(adic, orbit[-1]))
        except smale.AdicError as exc:
            if len(orbit) == 1:
                raise
            # the orbit ran into a maximal prefix whose image needs more edges
            stopped = str(exc)
            break
    out = {"orbit": ["".join(p) for p in orbit], "image": "".join(orbit[1]), "stopped": stopped}
    return out


def cmd_substitution(run: _Run) -> dict:
    adic = _adic(run)
    run.budget(iterations=run.args.iterations)
    w = smale.substitution_expand(adic, run.args.seed_tile, run.args.iterations)
    return {"word": "".join(w), "length": len(w), "counts": dict(sorted((t, w.count(t)) for t in set(w)))}


def cmd_tile_lengths(run: _Run) -> dict:
    if run.args.matrix:
        return smale.perron_data(json.loads(run.args.matrix)).to_json()
    return smale.tile_lengths(_adic(run)).to_json()


def cmd_itinerary(run: _Run) -> dict:
    a = run.args
    adic = _adic(run)
    path = _prefix(adic, a.prefix, a.length)
    run.budget(steps=a.steps)
    it = smale.leaf_itinerary(adic, path, a.steps)
    n = smale.is_factor(it, adic, adic.vertices[0])
    run.failed = n is None
    freq = {t: it.count(t) / len(it) for t in sorted(set(it))}
    return {"itinerary": "".join(it), "factor_of_iterate": n, "frequencies": freq}


COMMANDS = {
    "logscale-delta": cmd_logscale_delta,
    "logscale-metric": cmd_logscale_metric,
    "paste": cmd_paste,
    "delta": cmd_delta,
    "thin-delta": cmd_thin_delta,
    "busemann": cmd_busemann,
    "criterion": cmd_criterion,
    "level-graph": cmd_level_graph,
    "act": cmd_act,
    "section": cmd_section,
    "nucleus": cmd_nucleus,
    "schreier": cmd_schreier,
    "cayley": cmd_cayley,
    "preimage-tree": cmd_preimage_tree,
    "boundary-scale": cmd_boundary_scale,
    "rotation-graph": cmd_rotation_graph,
    "splice-check": cmd_splice_check,
    "fried": cmd_fried,
    "dual-sft": cmd_dual_sft,
    "duality-witness": cmd_duality_witness,
    "limit-space": cmd_limit_space,
    "gamma-graph": cmd_gamma_graph,
    "vershik": cmd_vershik,
    "substitution": cmd_substitution,
    "tile-lengths": cmd_tile_lengths,
    "itinerary": cmd_itinerary,
}


def _positive(text: str) -> int:
    v = int(text)
    if v <= 0:
        raise argparse.ArgumentTypeError("must be positive")
    return v


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="hypgrpd", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)

    def add(name: str, *groups: str) -> argparse.ArgumentParser:
        sp = sub.add_parser(name)
        sp.add_argument("--out", help="write the report here instead of stdout")
        sp.add_argument("--format", choices=("json", "dot", "table"), default="json")
        sp.add_argument("--seed", type=int, default=0)
        if "graph" in groups:
            sp.add_argument("--preset", default="doubling", choices=sorted(germs.PRESETS))
            sp.add_argument("--graph", help="graph or cocycle-graph JSON file")
            sp.add_argument("--radius", type=_positive, default=4)
        if "group" in groups:
            sp.add_argument("--preset", default="adding-machine")
            sp.add_argument("--recursion", help="wreath recursion JSON file")
        if "sft" in groups:
            sp.add_argument("--preset", default="golden-mean")
            sp.add_argument("--sft", help="SFT JSON file")
            sp.add_argument("--prohibited", nargs="*")
            sp.add_argument("--alphabet")
        if "adic" in groups:
            sp.add_argument("--adic", help="Bratteli-Vershik JSON file")
        return sp

    for name in ("logscale-delta", "logscale-metric", "paste"):
        sp = add(name)
        sp.add_argument("--input", required=True)
        if name == "logscale-metric":
            sp.add_argument("--delta", type=_positive)
    add("delta", "graph")
    sp = add("thin-delta", "graph")
    sp.add_argument("--exhaustive", action="store_true")
    sp.add_argument("--samples", type=_positive, default=200)
    sp = add("busemann", "graph")
    sp.add_argument("--x", type=int, default=0)
    sp.add_argument("--y", type=int, default=1)
    sp = add("criterion", "graph")
    sp.add_argument("--delta1", type=_positive)
    sp.add_argument("--m", type=_positive, default=1)
    sp.add_argument("--horizon", type=_positive, default=8)
    sp = add("level-graph", "graph")
    sp.add_argument("--delta2", type=_positive, default=2)
    sp.add_argument("--r", type=_positive, default=8)
    sp.add_argument("--rho1", type=_positive, default=1)
    sp.add_argument("--k", type=int, default=0)
    for name in ("act", "section"):
        sp = add(name, "group")
        sp.add_argument("--element", required=True)
        sp.add_argument("--word", required=True)
        if name == "act":
            sp.add_argument("--budget", type=_positive, default=10_000)
    sp = add("nucleus", "group")
    sp.add_argument("--budget", type=_positive, default=2_000)
    sp = add("schreier", "group")
    sp.add_argument("--level", type=_positive, default=3)
    sp = add("cayley")
    sp.add_argument("--preset", default="doubling", choices=sorted(germs.PRESETS))
    sp.add_argument("--radius", type=_positive, default=3)
    sp = add("preimage-tree")
    sp.add_argument("--word", default="(0)")
    sp.add_argument("--depth", type=_positive, default=3)
    sp = add("boundary-scale")
    sp.add_argument("--radius", type=_positive, default=6)
    sp.add_argument("--ray1", default="000")
    sp.add_argument("--ray2", default="100")
    sp = add("rotation-graph")
    sp.add_argument("--interval", nargs=2, default=["0", "1"])
    sp.add_argument("--word-bound", type=_positive, default=4)
    sp.add_argument("--scaling", action="store_true")
    sp.add_argument("--edge-span", type=_positive, default=3)
    sp = add("splice-check", "sft")
    sp.add_argument("--x")
    sp.add_argument("--y")
    sp.add_argument("--max-pre", type=int, default=1)
    sp.add_argument("--max-period", type=_positive, default=2)
    sp = add("fried", "sft")
    sp.add_argument("--x", required=True)
    sp.add_argument("--y", required=True)
    sp.add_argument("--horizon", type=_positive, default=20)
    add("dual-sft", "sft")
    sp = add("duality-witness", "sft")
    sp.add_argument("--horizon", type=_positive, default=10)
    sp = add("limit-space", "group")
    sp.add_argument("--level", type=_positive, default=3)
    sp.add_argument("--budget", type=_positive, default=2_000)
    sp = add("gamma-graph", "group")
    sp.add_argument("--max-len", type=_positive, default=4)
    for name in ("vershik", "itinerary"):
        sp = add(name, "adic")
        sp.add_argument("--prefix", help="edge word, comma separated for multi-character names")
        sp.add_argument("--length", type=_positive, default=8, help="prefix length when starting at the minimal path")
        sp.add_argument("--steps", type=_positive, default=8)
    sp = add("substitution", "adic")
    sp.add_argument("--seed-tile", default="A")
    sp.add_argument("--iterations", type=int, default=2)
    sp = add("tile-lengths", "adic")
    sp.add_argument("--matrix", help='JSON matrix such as "[[2,1],[1,1]]"')
    return p


def _table(result: dict) -> str:
    lines = []
    for k in sorted(result):
        v = result[k]
        if isinstance(v, (dict, list)) or hasattr(v, "to_json"):
            v = json.dumps(v, default=_jsonable, sort_keys=True)
        lines.append(f"{k}\t{v}")
    return "\n".join(lines) + "\n"


def run(argv: list[str] | None = None) -> tuple[int, str]:
    """Execute one command and return ``(exit status, report text)``."""
    return _execute(build_parser().parse_args(argv))


def _execute(args: argparse.Namespace) -> tuple[int, str]:
    state = _Run(args)
    status = EXIT_OK
    try:
        result = COMMANDS[args.command](state)
    except selfsim.BudgetExceeded as exc:
        return EXIT_BUDGET, json.dumps({"schema": SCHEMA, "error": str(exc), "budgets": state.budgets}, sort_keys=True) + "\n"
    except (ValueError, KeyError, OSError, json.JSONDecodeError) as exc:
        return EXIT_INPUT, json.dumps({"schema": SCHEMA, "error": f"{type(exc).__name__}: {exc}"}, sort_keys=True) + "\n"
    if state.failed:
        status = EXIT_VIOLATION
    if args.format == "dot":
        if state.dot is None:
            return EXIT_INPUT, json.dumps({"schema": SCHEMA, "error": f"{args.command} has no graph output"}) + "\n"
        return status, state.dot
    if args.format == "table":
        return status, _table(result)
    config = {k: v for k, v in sorted(vars(args).items()) if k not in ("out", "format")}
    report = {
        "schema": SCHEMA,
        "command": args.command,
        "seed": args.seed,
        "config_hash": hashlib.sha256(json.dumps(config, sort_keys=True, default=str).encode()).hexdigest(),
        "inputs": state.inputs,
        "budgets": state.budgets,
        "truncated": state.truncated,
        "status": "violation" if state.failed else "ok",
        "result": result,
    }
    text = json.dumps(json.loads(json.dumps(report, default=_jsonable)), sort_keys=True, indent=2) + "\n"
    return status, text


def main(argv: list[str] | None = None) -> int:
    try:
        args = build_parser().parse_args(argv)
    except SystemExit as exc:
        return EXIT_INPUT if exc.code else EXIT_OK
    status, text = _execute(args)
    if args.out and status != EXIT_INPUT:
        Path(args.out).write_text(text)
    else:
        sys.stdout.write(text)
    return status


if __name__ == "__main__":
    sys.exit(main())

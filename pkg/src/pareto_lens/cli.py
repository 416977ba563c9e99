"""pareto-lens command line: generate, solve, analyze and report."""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import __version__
from .core import ApproximationSet, DimensionError, InsufficientDataError, ParseError, read_set, write_set
from .correlation import pairwise_matrix
from .io import atomic_write_text, write_json
from .momkp import InstanceError, SetKind, generate, read_instance, write_instance
from .ranges import DEFAULT_CUTOFF
from .regionmap import (
    DEFAULT_ALPHA,
    DEFAULT_RESOLUTION,
    UnsupportedArityError,
    build_distribution_map,
    build_frequency_map,
    threshold_sweep,
)
from .report import (
    ReportOptions,
    base_meta,
    build_report,
    choose_thresholds,
    corr_csv,
    corr_payload,
    parse_policy,
    ranges_csv,
    ranges_payload,
    region_table,
    regionmap_payload,
    render_region,
    sweep_csv,
)
from .scatter import choose_pivot, pivot_scatter, render_scatter, spread_scores
from .solver import SolverParams, Stage, plan_stages, run_pipeline, run_stage, stage_seed
from .svg import with_meta

EXIT_OK, EXIT_DATA, EXIT_USAGE = 0, 1, 2
GENERATE_KINDS = [k.value for k in SetKind if k is not SetKind.EXTERNAL]
DATA_ERRORS = (ParseError, InstanceError, InsufficientDataError, DimensionError, OSError)


class UsageError(Exception):
    pass


# -- argument types ----------------------------------------------------------


def _float_list(text: str) -> list[float]:
    try:
        return [float(v) for v in text.split(",") if v.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {text!r}") from None


def _int_list(text: str) -> list[int]:
    try:
        return [int(v) for v in text.split(",") if v.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}") from None


def _policy(text: str) -> str:
    try:
        parse_policy(text)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None
    return text


def _kind(text: str) -> str:
    return text.upper()


def _positive(text: str) -> int:
    v = int(text)
    if v < 1:
        raise argparse.ArgumentTypeError("must be a positive integer")
    return v


# -- parser ------------------------------------------------------------------


def _analysis_flags(p: argparse.ArgumentParser, *, threshold=False, pivot=False, alpha=False, tau=False):
    p.add_argument("inputs", nargs="+", help="approximation-set CSV files")
    p.add_argument("--out-dir", default=".", help="output directory (default: current directory)")
    if tau:
        p.add_argument("--tau-variant", choices=["a", "b"], default="a",
                       help="tie handling for Kendall tau (a: plain pair counts, b: tie-corrected)")
    if threshold:
        p.add_argument("--threshold", type=_float_list, default=None,
                       help="raw threshold per objective (one value is broadcast)")
        p.add_argument("--threshold-policy", type=_policy, default="min-empty-r0",
                       help="min-empty-r0 | mean | fixed:<level in [0,1]>")
        p.add_argument("--resolution", type=_positive, default=DEFAULT_RESOLUTION)
    if alpha:
        p.add_argument("--alpha", type=_positive, default=DEFAULT_ALPHA, help="number of sweep intervals")
    if pivot:
        p.add_argument("--pivot", default=None, help="pivot objective: 1-based index or name (default: widest spread)")


def build_parser() -> tuple[argparse.ArgumentParser, list[argparse.ArgumentParser]]:
    parser = argparse.ArgumentParser(prog="pareto-lens", description=__doc__)
    parser.add_argument("--version", action="version", version=f"pareto-lens {__version__}")
    parser.add_argument("--config", default=None, help="JSON file of default flag values")
    sub = parser.add_subparsers(dest="command", required=True)
    leaves = []

    g = sub.add_parser("generate", help="write benchmark knapsack instances")
    g.add_argument("--kind", type=_kind, choices=GENERATE_KINDS, required=True)
    g.add_argument("--n", type=_positive, default=1000)
    g.add_argument("--m", type=_positive, default=4)
    g.add_argument("--p", type=_positive, default=4)
    g.add_argument("--capacity", type=int, default=None, help="capacity per constraint (default 50 per item)")
    g.add_argument("--count", type=_positive, default=5)
    g.add_argument("--seed", type=int, default=0)
    g.add_argument("--out-dir", default=".")
    g.set_defaults(func=cmd_generate)
    leaves.append(g)

    s = sub.add_parser("solve", help="run the archive-seeded solver pipeline on one instance")
    s.add_argument("--instance", required=True)
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--budget", type=_positive, default=100_000, help="evaluations per stage")
    s.add_argument("--population", type=_positive, default=200)
    s.add_argument("--mask", type=_int_list, default=None, help="1-based objectives to optimise, e.g. 1,3")
    s.add_argument("--stage", default=None, help="run one stage only; 'list' prints the stage ids")
    s.add_argument("--out", default=None, help="output CSV (default: <instance stem>.set.csv)")
    s.add_argument("--quiet", action="store_true")
    s.set_defaults(func=cmd_solve)
    leaves.append(s)

    a = sub.add_parser("analyze", help="run one analysis step")
    asub = a.add_subparsers(dest="step", required=True)
    c = asub.add_parser("corr", help="pairwise Kendall tau and relation class")
    _analysis_flags(c, tau=True)
    c.set_defaults(func=cmd_corr)
    r = asub.add_parser("ranges", help="objective ranges and meaningfulness")
    _analysis_flags(r)
    r.add_argument("--cutoff", type=float, default=DEFAULT_CUTOFF, help="range fraction cutoff")
    r.add_argument("--reference", type=_float_list, default=None, help="reference scale per objective")
    r.set_defaults(func=cmd_ranges)
    rm = asub.add_parser("regionmap", help="distribution of solutions over good/bad regions")
    _analysis_flags(rm, threshold=True)
    rm.set_defaults(func=cmd_regionmap)
    sw = asub.add_parser("sweep", help="instances with a non-empty region across threshold levels")
    _analysis_flags(sw, alpha=True)
    sw.add_argument("--region", type=int, default=0)
    sw.set_defaults(func=cmd_sweep)
    sc = asub.add_parser("scatter", help="normalised pivot scatter plot")
    _analysis_flags(sc, pivot=True)
    sc.add_argument("--out", default=None, help="SVG path for a single input (CSV twin written alongside)")
    sc.set_defaults(func=cmd_scatter)
    leaves += [c, r, rm, sw, sc]

    rep = sub.add_parser("report", help="all four steps plus an index page")
    _analysis_flags(rep, threshold=True, pivot=True, alpha=True, tau=True)
    rep.add_argument("--cutoff", type=float, default=DEFAULT_CUTOFF)
    rep.set_defaults(func=cmd_report)
    leaves.append(rep)
    return parser, leaves


def _apply_config(parser, leaves, argv) -> None:
    pre = argparse.ArgumentParser(add_help=False)
    pre.add_argument("--config", default=None)
    known, _ = pre.parse_known_args(argv)
    if not known.config:
        return
    try:
        cfg = json.loads(Path(known.config).read_text(encoding="utf-8"))
    except (OSError, json.JSONDecodeError) as exc:
        parser.error(f"cannot read config {known.config}: {exc}")
    if not isinstance(cfg, dict):
        parser.error("config file must hold a JSON object")
    dests = {act.dest for leaf in leaves for act in leaf._actions}
    unknown = sorted(set(cfg) - dests)
    if unknown:
        parser.error(f"unknown config keys: {', '.join(unknown)}")
    for leaf in leaves:
        own = {act.dest: act for act in leaf._actions}
        values = {}
        for k, v in cfg.items():
            if k not in own:
                continue
            act = own[k]
            if isinstance(v, str) and act.type is not None:
                try:
                    v = act.type(v)
                except (argparse.ArgumentTypeError, ValueError) as exc:
                    parser.error(f"config key {k}: {exc}")
            values[k] = v
            act.required = False
        leaf.set_defaults(**values)


def effective_config(args) -> dict:
    return {k: v for k, v in sorted(vars(args).items()) if k not in ("func", "config")}


# -- helpers -----------------------------------------------------------------


def _load_sets(paths) -> list[ApproximationSet]:
    return [read_set(p) for p in paths]


def _resolve_pivot(aset: ApproximationSet, pivot) -> int | None:
    if pivot is None:
        return None
    names = [s.name for s in aset.specs]
    if str(pivot) in names:
        return names.index(str(pivot))
    try:
        k = int(pivot)
    except ValueError:
        raise UsageError(f"unknown pivot {pivot!r}; objectives are {', '.join(names)}") from None
    if not 1 <= k <= aset.m:
        raise UsageError(f"pivot {k} out of range 1..{aset.m}")
    return k - 1


def _stem(aset: ApproximationSet, k: int) -> str:
    return aset.instance_id or f"set{k + 1}"


def _echo(text: str) -> None:
    print(text)


# -- commands ----------------------------------------------------------------


def cmd_generate(args) -> int:
    out = Path(args.out_dir)
    insts = []
    # build everything first so a bad combination writes nothing
    for k in range(args.count):
        seed = stage_seed(args.seed, f"generate:{args.kind}:{k + 1}")
        try:
            insts.append(generate(args.kind, args.n, args.m, args.p, args.capacity, seed))
        except InstanceError as exc:
            raise UsageError(str(exc)) from None
    for k, inst in enumerate(insts):
        path = out / f"{args.kind}_n{args.n}_{k + 1}.momkp"
        write_instance(inst, path)
        _echo(f"{path}  seed={inst.seed}  W={inst.capacities[0]}")
    return EXIT_OK


def cmd_solve(args) -> int:
    inst = read_instance(args.instance)
    mask = None
    if args.mask:
        if sorted(set(args.mask)) != sorted(args.mask) or not all(1 <= k <= inst.p for k in args.mask):
            raise UsageError(f"--mask must list distinct objectives in 1..{inst.p}")
        if len(args.mask) < 2:
            raise UsageError("--mask needs at least two objectives")
        mask = tuple(k - 1 for k in args.mask)
    try:
        params = SolverParams(population=args.population, evaluations=args.budget, seed=args.seed, objective_mask=mask)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    objectives = mask or tuple(range(inst.p))
    stages = plan_stages(objectives)
    if args.stage == "list":
        for st in stages:
            _echo(st.stage_id)
        return EXIT_OK
    stem = Path(args.instance).stem
    out = Path(args.out) if args.out else Path(f"{stem}.set.csv")
    meta = {
        "tool": f"pareto-lens {__version__}",
        "instance_file": Path(args.instance).name,
        "master_seed": str(args.seed),
        "budget": str(args.budget),
        "population": str(args.population),
        "mask": ",".join(str(k + 1) for k in objectives),
    }
    if args.stage:
        by_id = {st.stage_id: st for st in stages}
        if args.stage not in by_id:
            raise UsageError(f"unknown stage {args.stage!r}; use --stage list")
        stage: Stage = by_id[args.stage]
        run = run_stage(inst, stage, params, args.seed)
        aset = run.archive.to_set(instance_id=stem)
        meta.update(stage=stage.stage_id, stage_seed=str(run.seed))
        if stage.seeded:
            meta["note"] = "seeded stage run alone: no archive, population fully random"
    else:
        def progress(run):
            if not args.quiet:
                print(f"{run.stage.stage_id}: {len(run.archive)} solutions", file=sys.stderr)

        aset = run_pipeline(inst, params, args.seed, stem, progress).approximation
    write_set(aset, out, meta)
    _echo(f"{out}  {len(aset)} solutions")
    return EXIT_OK


def cmd_corr(args) -> int:
    root = Path(args.out_dir)
    for k, aset in enumerate(_load_sets(args.inputs)):
        name = _stem(aset, k)
        payload = corr_payload(aset, args.tau_variant)
        payload["meta"]["config"] = effective_config(args)
        write_json(root / name / "corr.json", payload)
        atomic_write_text(root / name / "corr.csv", corr_csv(aset, payload))
        for rel in pairwise_matrix(aset, args.tau_variant):
            _echo(f"{name}  {aset.specs[rel.i].name}-{aset.specs[rel.j].name}  tau={rel.tau:+.3f}  {rel.kind.value}")
    return EXIT_OK


def cmd_ranges(args) -> int:
    if not 0.0 < args.cutoff < 1.0:
        raise UsageError("--cutoff must lie strictly between 0 and 1")
    root = Path(args.out_dir)
    for k, aset in enumerate(_load_sets(args.inputs)):
        name = _stem(aset, k)
        if args.reference is not None and len(args.reference) != aset.m:
            raise UsageError(f"--reference needs {aset.m} values")
        payload = ranges_payload(aset, args.cutoff, args.reference)
        payload["meta"]["config"] = effective_config(args)
        write_json(root / name / "ranges.json", payload)
        atomic_write_text(root / name / "ranges.csv", ranges_csv(payload))
        for row in payload["objectives"]:
            flag = "meaningful" if row["meaningful"] else "not meaningful"
            _echo(f"{name}  {row['name']}  range={row['range']:g}  fraction={row['range_fraction']:.3f}  {flag}")
    return EXIT_OK


def cmd_regionmap(args) -> int:
    root = Path(args.out_dir)
    sets = _load_sets(args.inputs)
    maps = []
    for k, aset in enumerate(sets):
        name = _stem(aset, k)
        try:
            choice = choose_thresholds(aset, args.threshold_policy, args.threshold, args.resolution)
        except ValueError as exc:
            raise UsageError(str(exc)) from None
        payload, rmap = regionmap_payload(aset, choice)
        payload["meta"]["config"] = effective_config(args)
        svg = render_region(rmap.percentages, aset.m, f"{name}: distribution of solutions")
        if svg is None:
            payload["table"] = region_table(rmap.percentages, aset.m)
        write_json(root / name / "regionmap.json", payload)
        if svg is not None:
            atomic_write_text(root / name / "regionmap.svg", with_meta(svg, payload["meta"]))
        maps.append(rmap)
        occupied = ", ".join(f"r{r}={c}" for r, c in enumerate(rmap.counts) if c)
        _echo(f"{name}  thresholds={list(choice.thresholds.t)} ({choice.policy})  {occupied}")
    if len(maps) > 1:
        freq = build_frequency_map(maps)
        payload = freq.as_dict()
        payload["meta"] = base_meta(inputs=[_stem(a, k) for k, a in enumerate(sets)], config=effective_config(args))
        write_json(root / "frequency.json", payload)
        svg = render_region(freq.fractions, freq.m, f"frequency of instances ({len(maps)})", "{:.0%}")
        if svg is not None:
            atomic_write_text(root / "frequency.svg", with_meta(svg, payload["meta"]))
    return EXIT_OK


def cmd_sweep(args) -> int:
    sets = _load_sets(args.inputs)
    curve = threshold_sweep(sets, args.alpha, args.region)
    names = ",".join(_stem(a, k) for k, a in enumerate(sets))
    out = Path(args.out_dir) / "sweep.csv"
    atomic_write_text(out, sweep_csv(curve, {"inputs": names}))
    zero = curve.first_zero_level()
    _echo(f"{out}  r{args.region} first empty at level {zero if zero is not None else 'never'}")
    return EXIT_OK


def cmd_scatter(args) -> int:
    root = Path(args.out_dir)
    sets = _load_sets(args.inputs)
    if args.out and len(sets) > 1:
        raise UsageError("--out takes a single input; use --out-dir for several")
    for k, aset in enumerate(sets):
        name = _stem(aset, k)
        pivot = _resolve_pivot(aset, args.pivot)
        note = ""
        if pivot is None:
            pivot = choose_pivot(aset)
            note = "pivot chosen automatically by spread score"
        meta = base_meta(instance=name, pivot=aset.specs[pivot].name, spread_scores=spread_scores(aset), note=note)
        svg_path, csv_path = render_scatter(
            pivot_scatter(aset, pivot), Path(args.out) if args.out else root / name / "scatter.svg",
            title=f"{name}: pivot {aset.specs[pivot].name}", meta=meta,
        )
        _echo(f"{svg_path}  {csv_path}")
    return EXIT_OK


def cmd_report(args) -> int:
    if not 0.0 < args.cutoff < 1.0:
        raise UsageError("--cutoff must lie strictly between 0 and 1")
    sets = _load_sets(args.inputs)
    pivot = None
    if args.pivot is not None:
        pivots = {_resolve_pivot(a, args.pivot) for a in sets}
        pivot = pivots.pop()
    opts = ReportOptions(
        tau_variant=args.tau_variant,
        cutoff=args.cutoff,
        policy=args.threshold_policy,
        thresholds=args.threshold,
        resolution=args.resolution,
        alpha=args.alpha,
        pivot=pivot,
        extra_meta={"config": effective_config(args)},
    )
    try:
        index = build_report(sets, args.out_dir, opts)
    except (ValueError, UnsupportedArityError) as exc:
        if isinstance(exc, DATA_ERRORS):
            raise
        raise UsageError(str(exc)) from None
    _echo(str(index))
    return EXIT_OK


def main(argv=None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    parser, leaves = build_parser()
    try:
        _apply_config(parser, leaves, argv)
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"pareto-lens: usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except DATA_ERRORS as exc:
        print(f"pareto-lens: error: {exc}", file=sys.stderr)
        return EXIT_DATA


if __name__ == "__main__":
    sys.exit(main())

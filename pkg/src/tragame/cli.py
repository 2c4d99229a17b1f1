"""Command-line front end: batch analyses with reproducible seeds.

Subcommands: gen, resolve, cost, enumerate, rest, sweep, congruity.  Every
data file carries a comment header naming the version, parameters, and
seeds; re-running with the same flags reproduces the data bytes (only the
header timestamp moves).  The default output directory comes from
TRAGAME_OUT_DIR, falling back to the working directory.
"""

from __future__ import annotations

import argparse
import os
import sys
from dataclasses import dataclass
from pathlib import Path

from .costs import RankCostModel, RankParams
from .experiments import (
    FixedFileTopology,
    GenerationError,
    GeometricTopology,
    InstanceGenParams,
    congruity,
    gen_instance,
    informed_gambler_congruity,
    pd_heuristic_status,
    sweep,
)
from .fileio import (
    CSV_FORMAT,
    FORMATS,
    bundled_instance_path,
    load_instance,
    load_status_corpus,
    save_instance,
    write_rows,
)
from .game import DEFAULT_DELTA, build_payoff_table, census
from .model import AttackerSet, NetworkInstance, TraKind, tra_events
from .rest import DEFAULT_M, DEFAULT_MAX_STAGES, DEFAULT_P, DEFAULT_X0, RestParams, run
from .seeding import derive_seed

OUT_DIR_ENV = "TRAGAME_OUT_DIR"


@dataclass(frozen=True)
class CliConfig:
    """Plumbing shared by all subcommands."""

    out_dir: Path
    fmt: str
    seed: int
    delta: float
    rank_params: RankParams


def parse_attackers(spec: str, node_count: int) -> AttackerSet:
    """Accepts empty|full|mask:<int>|list:<nodes>|<comma-separated nodes>."""
    text = spec.strip().lower()
    if text == "empty":
        return AttackerSet.empty(node_count)
    if text in ("full", "all"):
        return AttackerSet.full(node_count)
    if text.startswith("mask:"):
        return AttackerSet(int(text[5:], 0), node_count)
    if text.startswith("list:"):
        text = text[5:]
    try:
        nodes = [int(part) for part in text.split(",") if part.strip()]
    except ValueError:
        raise ValueError(f"cannot parse attacker spec {spec!r}") from None
    return AttackerSet.from_nodes(nodes, node_count)


def _load(args: argparse.Namespace) -> NetworkInstance:
    path = Path(args.instance) if args.instance else bundled_instance_path()
    return load_instance(path)


def _config(args: argparse.Namespace) -> CliConfig:
    out_dir = Path(
        args.out_dir
        if getattr(args, "out_dir", None)
        else os.environ.get(OUT_DIR_ENV, ".")
    )
    return CliConfig(
        out_dir=out_dir,
        fmt=getattr(args, "format", CSV_FORMAT),
        seed=getattr(args, "seed", 0),
        delta=getattr(args, "delta", DEFAULT_DELTA),
        rank_params=RankParams(interference_radius=getattr(args, "radius", 2)),
    )


def _out_path(cfg: CliConfig, args: argparse.Namespace, default_name: str) -> Path:
    if getattr(args, "out", None):
        return Path(args.out)
    return cfg.out_dir / default_name


def cmd_gen(cfg: CliConfig, args: argparse.Namespace) -> int:
    topology = (
        FixedFileTopology(args.topology_file)
        if args.topology_file
        else GeometricTopology(radius=args.radius_geo, retries=args.retries)
    )
    params = InstanceGenParams(
        node_count=args.nodes,
        hop_length_range=(args.hop_min, args.hop_max),
        vo_fraction=args.vo_fraction,
        topology=topology,
    )
    for index in range(args.count):
        seed = derive_seed(cfg.seed, index)
        instance = gen_instance(params, seed)
        path = cfg.out_dir / f"instance_{index:04d}.yaml"
        save_instance(
            path,
            instance,
            meta={
                "master_seed": cfg.seed,
                "index": index,
                "instance_seed": seed,
                "params": params,
            },
        )
        print(path)
    return 0


def cmd_resolve(cfg: CliConfig, args: argparse.Namespace) -> int:
    instance = _load(args)
    attackers = parse_attackers(args.attackers, instance.node_count)
    events = tra_events(instance, attackers)
    for event in events:
        verb = "upgraded" if event.kind is TraKind.UPGRADE else "downgraded"
        print(
            f"flow {event.flow_id}: {event.kind.value} at node "
            f"{event.node} ({verb})"
        )
    if not events:
        print("no remapping events")
    if args.out:
        write_rows(
            args.out,
            ["flow_id", "node", "kind"],
            [
                {"flow_id": e.flow_id, "node": e.node, "kind": e.kind.value}
                for e in events
            ],
            meta={"attackers": attackers.mask, "instance": args.instance or "bundled"},
            fmt=cfg.fmt,
        )
    return 0


def cmd_cost(cfg: CliConfig, args: argparse.Namespace) -> int:
    instance = _load(args)
    attackers = parse_attackers(args.attackers, instance.node_count)
    model = RankCostModel(instance, cfg.rank_params)
    base = model.baseline()
    costs = model.node_costs(attackers)
    statuses = model.classify(attackers)
    fields = ["node", "cost_all_neutral", "cost_A", "status"]
    rows = [
        {
            "node": i,
            "cost_all_neutral": base[i],
            "cost_A": costs[i],
            "status": statuses[i].value,
        }
        for i in range(instance.node_count)
    ]
    reference = None
    if args.reference:
        corpus = load_status_corpus(args.reference)
        if attackers.mask not in corpus:
            raise ValueError(
                f"{args.reference} has no statuses for attacker mask "
                f"{attackers.mask} (available: {sorted(corpus)})"
            )
        reference = corpus[attackers.mask]
        fields += ["reference_status", "match"]
        for i, row in enumerate(rows):
            row["reference_status"] = reference[i].value
            row["match"] = statuses[i] is reference[i]
    print(f"{'node':>4} {'cost(no attack)':>16} {'cost(A)':>8} {'status':<10}"
          + ("reference" if reference else ""))
    for row in rows:
        tail = (
            f" {row['reference_status']}{'' if row['match'] else ' *'}"
            if reference
            else ""
        )
        print(
            f"{row['node']:>4} {row['cost_all_neutral']:>16} "
            f"{row['cost_A']:>8} {row['status']:<10}{tail}"
        )
    if reference:
        agreed = sum(row["match"] for row in rows)
        print(f"agreement with reference: {agreed}/{len(rows)} (* = mismatch)")
    if args.out:
        write_rows(
            args.out,
            fields,
            rows,
            meta={
                "attackers": attackers.mask,
                "interference_radius": cfg.rank_params.interference_radius,
                "instance": args.instance or "bundled",
            },
            fmt=cfg.fmt,
        )
    return 0


def cmd_enumerate(cfg: CliConfig, args: argparse.Namespace) -> int:
    instance = _load(args)
    table = build_payoff_table(instance, cfg.rank_params)
    counts = census(table, delta=cfg.delta)
    n = instance.node_count
    cost_fields = [f"cost_{i}" for i in range(n)]
    rows = []
    for mask in range(table.profile_count):
        row = {
            "profile_bitmask": mask,
            "is_ne": mask in counts.ne_profiles,
            "is_sce": mask in counts.sce_profiles,
        }
        profile_costs = table.row(mask)
        for i in range(n):
            row[f"cost_{i}"] = profile_costs[i]
        rows.append(row)
    path = _out_path(cfg, args, "census.csv")
    write_rows(
        path,
        ["profile_bitmask", "is_ne", "is_sce", *cost_fields],
        rows,
        meta={
            "delta": cfg.delta,
            "interference_radius": cfg.rank_params.interference_radius,
            "instance": args.instance or "bundled",
        },
        fmt=cfg.fmt,
    )
    print(
        f"ne_fraction={counts.ne_fraction} sce_fraction={counts.sce_fraction} "
        f"({len(counts.ne_profiles)} NE, {len(counts.sce_profiles)} SCE of "
        f"{table.profile_count}; written to {path})"
    )
    return 0


def _resolve_a0(spec: str, node_count: int, seed: int) -> AttackerSet:
    import random

    if spec.strip().lower() == "random":
        mask = random.Random(seed).getrandbits(node_count)
        return AttackerSet(mask, node_count)
    return parse_attackers(spec, node_count)


def cmd_rest(cfg: CliConfig, args: argparse.Namespace) -> int:
    instance = _load(args)
    n = instance.node_count
    try:
        table = build_payoff_table(instance, cfg.rank_params)
        counts = census(table, delta=cfg.delta)
        cost_fn = table.row
    except ValueError:
        # beyond the enumeration cap: run without equilibrium labels
        table = counts = None
        cost_fn = RankCostModel(instance, cfg.rank_params).node_costs
    base_meta = {
        "m": args.m,
        "p": args.p,
        "x0": args.x0,
        "max_stages": args.max_stages,
        "a0": args.a0,
        "master_seed": cfg.seed,
        "instance": args.instance or "bundled",
    }
    cost_fields = [f"cost_{i}" for i in range(n)]
    summary_rows = []
    traces = []
    for r in range(args.runs):
        run_seed = derive_seed(cfg.seed, r)
        a0 = _resolve_a0(args.a0, n, derive_seed(run_seed, 0))
        params = RestParams(
            m=args.m,
            p=args.p,
            x0=args.x0,
            max_stages=args.max_stages,
            seed=derive_seed(run_seed, 1),
        )
        trace = run(instance, params, a0, cost_fn=cost_fn)
        traces.append(trace)
        trace_rows = []
        for rec in trace.stages:
            row = {
                "stage": rec.stage,
                "attacker_bitmask": rec.attackers_mask,
                "dissatisfied_count": rec.dissatisfied_count(n),
            }
            for i in range(n):
                row[f"cost_{i}"] = rec.costs[i]
            trace_rows.append(row)
        write_rows(
            cfg.out_dir / f"rest_trace_run{r:03d}.csv",
            ["stage", "attacker_bitmask", "dissatisfied_count", *cost_fields],
            trace_rows,
            meta={**base_meta, "run": r, "run_seed": run_seed, "a0_mask": a0.mask},
            fmt=cfg.fmt,
        )
        final = trace.final_mask if trace.converged else None
        summary_rows.append(
            {
                "run": r,
                "terminal": trace.terminal.kind.value,
                "stages": trace.terminal.stage if trace.converged else "",
                "a_inf_bitmask": final if final is not None else "",
                "is_ne": (final in counts.ne_profiles)
                if counts and final is not None
                else "",
                "is_sce": (final in counts.sce_profiles)
                if counts and final is not None
                else "",
            }
        )
    write_rows(
        cfg.out_dir / "rest_summary.csv",
        ["run", "terminal", "stages", "a_inf_bitmask", "is_ne", "is_sce"],
        summary_rows,
        meta=base_meta,
        fmt=cfg.fmt,
    )
    if args.evolution:
        horizon = max(len(t.stages) for t in traces)
        evolution_rows = []
        for k in range(horizon):
            attackers = dissatisfied = 0.0
            for t in traces:
                # converged traces hold their terminal state forever
                rec = t.stages[min(k, len(t.stages) - 1)]
                attackers += rec.attackers_mask.bit_count()
                dissatisfied += rec.dissatisfied_count(n)
            evolution_rows.append(
                {
                    "stage": k,
                    "mean_attackers": attackers / len(traces),
                    "mean_dissatisfied": dissatisfied / len(traces),
                }
            )
        write_rows(
            args.evolution,
            ["stage", "mean_attackers", "mean_dissatisfied"],
            evolution_rows,
            meta=base_meta,
            fmt=cfg.fmt,
        )
    converged = [t for t in traces if t.converged]
    share = len(converged) / len(traces)
    mean_stages = (
        sum(t.terminal.stage for t in converged) / len(converged)
        if converged
        else float("nan")
    )
    mean_a_inf = (
        sum(t.final_mask.bit_count() for t in converged) / len(converged)
        if converged
        else float("nan")
    )
    print(
        f"{len(traces)} runs: {share:.0%} converged, mean stages "
        f"{mean_stages:.1f}, mean |A_inf| {mean_a_inf:.2f}"
    )
    return 0


def cmd_sweep(cfg: CliConfig, args: argparse.Namespace) -> int:
    from .experiments import gen_instances

    params = InstanceGenParams(
        node_count=args.nodes,
        hop_length_range=(args.hop_min, args.hop_max),
        vo_fraction=args.vo_fraction,
        topology=GeometricTopology(radius=args.radius_geo, retries=args.retries),
    )
    instances = gen_instances(params, args.count, derive_seed(cfg.seed, 0))
    m_values = [int(v) for v in args.m_values.split(",")]
    x0_values = [float(v) for v in args.x0_values.split(",")]
    cells = sweep(
        instances,
        m_values,
        x0_values,
        rest_params_base=RestParams(p=args.p, max_stages=args.max_stages),
        runs=args.runs,
        delta=cfg.delta,
        master_seed=derive_seed(cfg.seed, 1),
        jobs=args.jobs,
    )
    rows = [
        {
            "m": c.m,
            "x0": c.x0,
            "mean_convergence_stages": c.mean_convergence_stages,
            "mean_sce_hit_exponent": (
                c.mean_sce_hit_exponent
                if c.mean_sce_hit_exponent is not None
                else "NONDETERMINATE"
            ),
            "nondeterminate_count": c.nondeterminate_count,
            "mean_improvement_share": c.mean_improvement_share,
            "instances": c.instances,
            "timeout_runs": c.timeout_runs,
        }
        for c in cells
    ]
    path = _out_path(cfg, args, "fig8_grid.csv")
    write_rows(
        path,
        list(rows[0].keys()),
        rows,
        meta={
            "master_seed": cfg.seed,
            "runs": args.runs,
            "delta": cfg.delta,
            "instances": args.count,
            "gen_params": params,
        },
        fmt=cfg.fmt,
    )
    for row in rows:
        print(
            f"m={row['m']:>3} x0={row['x0']:>5} stages={row['mean_convergence_stages']}"
            f" exponent={row['mean_sce_hit_exponent']}"
            f" improvement={row['mean_improvement_share']}"
        )
    print(f"grid written to {path}")
    return 0


def cmd_congruity(cfg: CliConfig, args: argparse.Namespace) -> int:
    instance = _load(args)
    n = instance.node_count
    corpus = load_status_corpus(args.truth)
    model = RankCostModel(instance, cfg.rank_params)
    masks = sorted(corpus)
    rows = []
    means: dict[str, float] = {}

    def add(classifier: str, values: dict[int, float]) -> None:
        for mask in masks:
            rows.append(
                {
                    "classifier": classifier,
                    "profile_bitmask": mask,
                    "congruity": values[mask],
                }
            )
        means[classifier] = sum(values.values()) / len(values)

    add(
        "rank_model",
        {
            mask: congruity(model.classify(AttackerSet(mask, n)), corpus[mask])
            for mask in masks
        },
    )
    for threshold in range(n + 1):
        add(
            f"pd_{threshold}",
            {
                mask: congruity(
                    pd_heuristic_status(AttackerSet(mask, n), threshold),
                    corpus[mask],
                )
                for mask in masks
            },
        )
    gambler_scores, gambler_mean = informed_gambler_congruity(corpus, n)
    add("gambler", gambler_scores)
    assert means["gambler"] == gambler_mean
    path = _out_path(cfg, args, "congruity.csv")
    write_rows(
        path,
        ["classifier", "profile_bitmask", "congruity"],
        rows,
        meta={
            "truth": args.truth,
            "instance": args.instance or "bundled",
            "interference_radius": cfg.rank_params.interference_radius,
        },
        fmt=cfg.fmt,
    )
    for classifier, value in means.items():
        print(f"{classifier}: mean congruity {value:.4f}")
    print(f"per-profile scores written to {path}")
    return 0


def _add_common(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--out-dir", help=f"output directory (default ${OUT_DIR_ENV} or .)")
    parser.add_argument("--format", choices=FORMATS, default=CSV_FORMAT)
    parser.add_argument("--seed", type=int, default=0, help="master seed")


def _add_instance(parser: argparse.ArgumentParser) -> None:
    parser.add_argument(
        "--instance", help="instance file (default: bundled 10-node scenario)"
    )
    parser.add_argument(
        "--radius", type=int, default=2, help="interference radius in hops"
    )


def _add_gen_params(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--nodes", type=int, default=10)
    parser.add_argument("--hop-min", type=int, default=2)
    parser.add_argument("--hop-max", type=int, default=5)
    parser.add_argument("--vo-fraction", type=float, default=0.5)
    parser.add_argument(
        "--radius-geo", type=float, default=0.4, help="geometric link radius"
    )
    parser.add_argument("--retries", type=int, default=1000)


def _add_rest_params(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--m", type=int, default=DEFAULT_M)
    parser.add_argument("--p", type=float, default=DEFAULT_P)
    parser.add_argument("--x0", type=float, default=DEFAULT_X0)
    parser.add_argument("--max-stages", type=int, default=DEFAULT_MAX_STAGES)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="tragame",
        description="Traffic remapping attack games: resolution, costs, "
        "equilibria, and the REST multistage strategy.",
    )
    sub = parser.add_subparsers(dest="subcommand", required=True)

    p = sub.add_parser("gen", help="generate random instances")
    _add_common(p)
    _add_gen_params(p)
    p.add_argument("--count", type=int, default=1)
    p.add_argument("--topology-file", help="reuse the graph of this instance file")
    p.set_defaults(handler=cmd_gen)

    p = sub.add_parser("resolve", help="report remapping events for a profile")
    _add_common(p)
    _add_instance(p)
    p.add_argument("--attackers", required=True)
    p.add_argument("--out", help="also write the events to this file")
    p.set_defaults(handler=cmd_resolve)

    p = sub.add_parser("cost", help="per-node costs and statuses for a profile")
    _add_common(p)
    _add_instance(p)
    p.add_argument("--attackers", required=True)
    p.add_argument(
        "--reference", help="ground-truth status CSV to diff the statuses against"
    )
    p.add_argument("--out", help="also write the table to this file")
    p.set_defaults(handler=cmd_cost)

    p = sub.add_parser("enumerate", help="exhaustive NE/SCE census")
    _add_common(p)
    _add_instance(p)
    p.add_argument("--delta", type=float, default=DEFAULT_DELTA)
    p.add_argument("--out")
    p.set_defaults(handler=cmd_enumerate)

    p = sub.add_parser("rest", help="run REST trajectories")
    _add_common(p)
    _add_instance(p)
    _add_rest_params(p)
    p.add_argument("--runs", type=int, default=1)
    p.add_argument(
        "--a0", default="empty", help="empty|full|random|mask:<int>|list:<nodes>"
    )
    p.add_argument("--delta", type=float, default=DEFAULT_DELTA)
    p.add_argument("--evolution", help="write per-stage run averages to this file")
    p.set_defaults(handler=cmd_rest)

    p = sub.add_parser("sweep", help="m x x0 campaign over random instances")
    _add_common(p)
    _add_gen_params(p)
    _add_rest_params(p)
    p.add_argument("--count", type=int, default=50, help="instances to draw")
    p.add_argument("--runs", type=int, default=100, help="runs per instance")
    p.add_argument("--m-values", default="5,10,25")
    p.add_argument("--x0-values", default="1,2,5,20")
    p.add_argument("--delta", type=float, default=DEFAULT_DELTA)
    p.add_argument("--jobs", type=int)
    p.add_argument("--out")
    p.set_defaults(handler=cmd_sweep)

    p = sub.add_parser("congruity", help="score classifiers against ground truth")
    _add_common(p)
    _add_instance(p)
    p.add_argument("--truth", required=True, help="ground-truth status CSV")
    p.add_argument("--out")
    p.set_defaults(handler=cmd_congruity)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    cfg = _config(args)
    try:
        return args.handler(cfg, args)
    except (ValueError, OSError, GenerationError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())

"""Stage-by-stage evolution of attacker and dissatisfied counts.

Averages many runs on one instance from a common starting profile;
converged runs hold their absorbing state while slower ones catch up.
Writes evolution.csv (stage, mean attackers, mean dissatisfied).
"""

from __future__ import annotations

import argparse
import random
from pathlib import Path

from tragame import AttackerSet, RestParams, load_instance, run
from tragame.cli import parse_attackers
from tragame.fileio import bundled_instance_path, write_rows
from tragame.game import build_payoff_table
from tragame.seeding import derive_seed


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--instance", help="default: bundled 10-node scenario")
    ap.add_argument("--runs", type=int, default=100)
    ap.add_argument("--a0", default="empty",
                    help="empty|full|random|mask:<int>|list:<nodes>")
    ap.add_argument("--m", type=int, default=10)
    ap.add_argument("--p", type=float, default=0.95)
    ap.add_argument("--x0", type=float, default=1.0)
    ap.add_argument("--max-stages", type=int, default=100_000)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--out-dir", default=".")
    args = ap.parse_args()

    instance = load_instance(args.instance or bundled_instance_path())
    n = instance.node_count
    table = build_payoff_table(instance)
    print(f"[evolution] {args.runs} runs from a0={args.a0}, m={args.m}, "
          f"p={args.p}, x0={args.x0}, seed={args.seed}")

    traces = []
    for r in range(args.runs):
        run_seed = derive_seed(args.seed, r)
        if args.a0.strip().lower() == "random":
            a0 = AttackerSet(
                random.Random(derive_seed(run_seed, 0)).getrandbits(n), n
            )
        else:
            a0 = parse_attackers(args.a0, n)
        params = RestParams(m=args.m, p=args.p, x0=args.x0,
                            max_stages=args.max_stages,
                            seed=derive_seed(run_seed, 1))
        traces.append(run(instance, params, a0, cost_fn=table.row))

    horizon = max(len(t.stages) for t in traces)
    rows = []
    for k in range(horizon):
        records = [t.stages[min(k, len(t.stages) - 1)] for t in traces]
        rows.append({
            "stage": k,
            "mean_attackers": sum(
                rec.attackers_mask.bit_count() for rec in records
            ) / len(traces),
            "mean_dissatisfied": sum(
                rec.dissatisfied_count(n) for rec in records
            ) / len(traces),
        })
    path = write_rows(
        Path(args.out_dir) / "evolution.csv",
        ["stage", "mean_attackers", "mean_dissatisfied"],
        rows,
        meta={
            "runs": args.runs, "a0": args.a0, "m": args.m, "p": args.p,
            "x0": args.x0, "master_seed": args.seed,
            "instance": args.instance or "bundled",
        },
    )
    converged = [t for t in traces if t.converged]
    print(f"[evolution] {len(converged)}/{len(traces)} runs converged; "
          f"horizon {horizon} stages")
    if converged:
        mean_stages = sum(t.terminal.stage for t in converged) / len(converged)
        mean_final = sum(
            t.final_mask.bit_count() for t in converged
        ) / len(converged)
        print(f"[evolution] mean convergence stage {mean_stages:.1f}, "
              f"mean |A_inf| {mean_final:.2f}")
    print(f"[evolution] wrote {path}")


if __name__ == "__main__":
    main()

"""How do the satisfaction memory m and gullibility x0 shape the dynamics?

Full grid campaign over shared random instances: per cell, mean stages
to convergence, mean SCEHitExponent, and mean improvement share. Writes
fig8_grid.csv.
"""

from __future__ import annotations

import argparse
from pathlib import Path

from tragame import InstanceGenParams, RestParams, gen_instances, sweep
from tragame.fileio import write_rows


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--instances", type=int, default=50)
    ap.add_argument("--runs", type=int, default=100)
    ap.add_argument("--nodes", type=int, default=10)
    ap.add_argument("--m-values", default="5,10,25")
    ap.add_argument("--x0-values", default="1,2,5,20")
    ap.add_argument("--delta", type=float, default=0.05)
    ap.add_argument("--seed", type=int, default=901)
    ap.add_argument("--jobs", type=int)
    ap.add_argument("--out-dir", default=".")
    args = ap.parse_args()

    m_values = [int(v) for v in args.m_values.split(",")]
    x0_values = [float(v) for v in args.x0_values.split(",")]
    print(f"[sweep] {args.instances} instances, grid m={m_values} "
          f"x x0={x0_values}, {args.runs} runs per (instance, cell)")
    instances = gen_instances(
        InstanceGenParams(node_count=args.nodes), args.instances,
        master_seed=args.seed,
    )
    cells = sweep(
        instances, m_values, x0_values, runs=args.runs, delta=args.delta,
        master_seed=args.seed + 1, jobs=args.jobs,
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
    path = write_rows(
        Path(args.out_dir) / "fig8_grid.csv",
        list(rows[0].keys()),
        rows,
        meta={
            "instances": args.instances, "runs": args.runs,
            "delta": args.delta, "master_seed": args.seed,
        },
    )
    header = f"{'m':>4} {'x0':>6} {'stages':>8} {'exponent':>16} {'improved':>9}"
    print(header)
    for row in rows:
        exponent = row["mean_sce_hit_exponent"]
        exponent = f"{exponent:.3f}" if isinstance(exponent, float) else exponent
        print(f"{row['m']:>4} {row['x0']:>6} "
              f"{row['mean_convergence_stages']:>8.2f} {exponent:>16} "
              f"{row['mean_improvement_share']:>9.2f}")
    print(f"[sweep] wrote {path}")


if __name__ == "__main__":
    main()

"""Does letting the dynamics play out defend the initial victims?

Victims are the nodes outside the random initial attacker set that are
dissatisfied with it (MIND). An instance counts as improved when, at the
absorbing profile, a larger share of those same nodes ends up neutral
and content (DONT_MIND) than was content initially. Writes
fig7_scatter.csv plus an SVG scatter of initial vs eventual shares.
"""

from __future__ import annotations

import argparse
from pathlib import Path

from tragame import InstanceGenParams, RestParams, gen_instances, improvement_rating
from tragame.fileio import write_rows

from _svg import scatter_svg


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--instances", type=int, default=200)
    ap.add_argument("--runs", type=int, default=100)
    ap.add_argument("--nodes", type=int, default=10)
    ap.add_argument("--m", type=int, default=10)
    ap.add_argument("--x0", type=float, default=1.0)
    ap.add_argument("--delta", type=float, default=0.05)
    ap.add_argument("--seed", type=int, default=801)
    ap.add_argument("--out-dir", default=".")
    args = ap.parse_args()

    out_dir = Path(args.out_dir)
    print(f"[defense] generating {args.instances} instances "
          f"(|N|={args.nodes}, seed={args.seed})")
    instances = gen_instances(
        InstanceGenParams(node_count=args.nodes), args.instances,
        master_seed=args.seed,
    )
    print(f"[defense] {args.runs} runs each from random A(0), "
          f"m={args.m}, x0={args.x0}")
    share, results = improvement_rating(
        instances, RestParams(m=args.m, x0=args.x0),
        runs_per_instance=args.runs, delta=args.delta,
        master_seed=args.seed + 1,
    )

    rows = [
        {
            "instance_index": r.instance_index,
            "initial_beneficiary_pct": r.initial_beneficiary_pct,
            "eventual_beneficiary_pct": r.eventual_beneficiary_pct,
            "improved": r.improved,
            "converged_runs": r.converged_runs,
            "timeout_runs": r.timeout_runs,
        }
        for r in results
    ]
    path = write_rows(
        out_dir / "fig7_scatter.csv",
        list(rows[0].keys()),
        rows,
        meta={
            "instances": args.instances, "runs": args.runs, "m": args.m,
            "x0": args.x0, "delta": args.delta, "master_seed": args.seed,
        },
    )
    scatter_svg(
        out_dir / "fig7_scatter.svg",
        [
            (r.initial_beneficiary_pct, r.eventual_beneficiary_pct)
            for r in results
            if r.initial_beneficiary_pct is not None
            and r.eventual_beneficiary_pct is not None
        ],
        xlabel="initially content share",
        ylabel="eventually content share",
    )
    print(f"[defense] improved on {share:.1%} of instances")
    print(f"[defense] wrote {path}")


if __name__ == "__main__":
    main()

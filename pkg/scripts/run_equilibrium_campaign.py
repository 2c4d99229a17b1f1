"""Do the adaptive dynamics land on self-confirming equilibria?

For each random instance, compare the share of runs whose absorbing
profile is an SCE (sce_hits) against the share of profiles that are SCEs
(sce_fraction). Landing above the diagonal means the dynamics seek
equilibria rather than stumble on them. Writes fig5_scatter.csv plus an
SVG scatter.
"""

from __future__ import annotations

import argparse
from pathlib import Path
from statistics import fmean

from tragame import InstanceGenParams, RestParams, campaign, gen_instances
from tragame.fileio import write_rows

from _svg import scatter_svg


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--instances", type=int, default=100)
    ap.add_argument("--runs", type=int, default=100)
    ap.add_argument("--nodes", type=int, default=10)
    ap.add_argument("--m", type=int, default=10)
    ap.add_argument("--x0", type=float, default=1.0)
    ap.add_argument("--delta", type=float, default=0.05)
    ap.add_argument("--seed", type=int, default=701)
    ap.add_argument("--jobs", type=int)
    ap.add_argument("--out-dir", default=".")
    args = ap.parse_args()

    out_dir = Path(args.out_dir)
    print(f"[equilibrium] generating {args.instances} instances "
          f"(|N|={args.nodes}, seed={args.seed})")
    instances = gen_instances(
        InstanceGenParams(node_count=args.nodes), args.instances,
        master_seed=args.seed,
    )
    print(f"[equilibrium] {args.runs} runs each, m={args.m}, x0={args.x0}")
    results = campaign(
        instances, RestParams(m=args.m, x0=args.x0), runs=args.runs,
        delta=args.delta, master_seed=args.seed + 1, jobs=args.jobs,
    )

    rows = [
        {
            "instance_index": r.instance_index,
            "ne_fraction": r.ne_fraction,
            "sce_fraction": r.sce_fraction,
            "ne_hits": r.ne_hits,
            "sce_hits": r.sce_hits,
            "sce_hit_exponent": (
                r.sce_hit_exponent
                if r.sce_hit_exponent is not None
                else "NONDETERMINATE"
            ),
            "mean_convergence_stages": r.mean_convergence_stages,
            "converged_runs": r.converged_runs,
            "timeout_runs": r.timeout_runs,
        }
        for r in results
    ]
    path = write_rows(
        out_dir / "fig5_scatter.csv",
        list(rows[0].keys()),
        rows,
        meta={
            "instances": args.instances, "runs": args.runs, "m": args.m,
            "x0": args.x0, "delta": args.delta, "master_seed": args.seed,
        },
    )
    scatter_svg(
        out_dir / "fig5_scatter.svg",
        [(r.sce_fraction, r.sce_hits) for r in results],
        xlabel="%SCE (share of profiles)",
        ylabel="SCE hits (share of runs)",
    )

    determinate = [r for r in results if r.sce_hit_exponent is not None]
    above = fmean(r.sce_hits >= r.sce_fraction for r in determinate)
    print(f"[equilibrium] determinate instances: {len(determinate)}"
          f"/{len(results)}")
    print(f"[equilibrium] sce_hits >= sce_fraction on {above:.1%} of them")
    if determinate:
        print(f"[equilibrium] mean SCEHitExponent "
              f"{fmean(r.sce_hit_exponent for r in determinate):.3f} "
              "(< 1 would mean equilibrium-seeking)")
    print(f"[equilibrium] wrote {path}")


if __name__ == "__main__":
    main()

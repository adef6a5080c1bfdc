"""Minimum energy to steer all eight states from -20 to 20, for three graphs and several horizons.

    python3 scripts/reproduce_fig2.py --horizons 1 2 5 --out out/fig2
"""

import argparse
from pathlib import Path

from genpath import formats
from genpath.experiments import Fig2Config, fig2_comparison


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--horizons", type=float, nargs="+", default=[1.0, 2.0, 5.0])
    parser.add_argument("--steps", type=int, default=2000)
    parser.add_argument("--out", type=Path, default=None, help="write trajectories and summaries here")
    args = parser.parse_args()

    print(f"{'t1':>5} {'system':>18} {'energy':>12} {'cond(W)':>10} {'terminal':>10}")
    for t1 in args.horizons:
        res = fig2_comparison(Fig2Config(t1=t1, steps=args.steps))
        for name, row in res.summary()["systems"].items():
            if row["feasible"]:
                print(f"{t1:5g} {name:>18} {row['energy']:12.4e} {row['condition']:10.2e} {row['terminal_error']:10.1e}")
            else:
                print(f"{t1:5g} {name:>18} {'infeasible':>12} {row['condition']:10.2e}")
        state = {True: "holds", False: "violated", None: "undecided (infeasible run)"}[res.ordering_holds]
        print(f"      ordering path > interconnect > antiregular: {state}")
        if args.out:
            d = args.out / f"t1_{t1:g}"
            d.mkdir(parents=True, exist_ok=True)
            for name, run in res.runs.items():
                (d / f"{name}.csv").write_text(formats.trajectory_to_csv(run.times, run.states, run.inputs))
            (d / "fig2_summary.json").write_text(formats.dumps(res.summary()))


if __name__ == "__main__":
    main()

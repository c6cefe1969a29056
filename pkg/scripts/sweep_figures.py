"""
Generate the sweep CSVs behind the four figure kinds, one file per parameter
point, under build/sweeps/:

  regret-osmd-T*.csv      mirror-descent regret at growing horizons
  gap-rbar-r*.csv         retention gap of the pure-sampling strategy vs r
  failure-pacbar-d*.csv   retention failure rate vs delta
  samples-rbar-m*.csv     sampling budget vs how many arms must go

Trial counts are desk-scale; pass --trials to change them uniformly.
"""

import argparse
import sys
import warnings
from pathlib import Path

from barlab.env import hard_instance
from barlab.harness import ExperimentConfig, run_experiment

ROOT = Path(__file__).resolve().parents[1]

HORIZONS = [500, 1000, 2000, 5000, 10000]
R_TARGETS = [0.05, 0.1, 0.2, 0.3, 0.5]
DELTAS = [0.05, 0.1, 0.2, 0.4]
RETAIN_SIZES = [2, 3, 4, 5, 6, 7, 8]


def run(out_dir: Path, name: str, **kwargs) -> None:
    run_experiment(ExperimentConfig(**kwargs), out_path=str(out_dir / f"{name}.csv"))
    print(f"   {name}.csv")


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--out-dir", default=str(ROOT / "build" / "sweeps"))
    parser.add_argument("--trials", type=int, default=300)
    args = parser.parse_args()
    out_dir = Path(args.out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    trials = args.trials

    print("regret vs horizon (osmd, H_1(10, 0.1)):")
    for t in HORIZONS:
        run(
            out_dir, f"regret-osmd-T{t}",
            algorithm="osmd", instance=hard_instance(10, 0.1),
            trials=trials, seed=210, rounds=t,
        )

    with warnings.catch_warnings():
        warnings.simplefilter("ignore", UserWarning)  # gap-0.15 instances warn
        inst = hard_instance(10, 0.15)
        print("retention gap vs r (rbar-sample, n=10, m=3):")
        for r in R_TARGETS:
            run(
                out_dir, f"gap-rbar-r{r}",
                algorithm="rbar-sample", instance=inst,
                trials=trials, seed=220, m=3, r=r,
            )

        print("sampling budget vs retained-set size (rbar-sample, n=10, r=0.1):")
        for m in RETAIN_SIZES:
            run(
                out_dir, f"samples-rbar-m{m}",
                algorithm="rbar-sample", instance=inst,
                trials=max(2, trials // 6), seed=230, m=m, r=0.1,
            )

    print("retention failure vs delta (pac-bar, H_1(10, 0.1), eps=0.1, m=4):")
    for delta in DELTAS:
        run(
            out_dir, f"failure-pacbar-d{delta}",
            algorithm="pac-bar", instance=hard_instance(10, 0.1),
            trials=trials, seed=240, eps=0.1, delta=delta, m=4,
        )

    return 0


if __name__ == "__main__":
    sys.exit(main())

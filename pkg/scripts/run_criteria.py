"""
Run the five statistical-gate experiments plus the divergence audit from the
pinned configs under scripts/configs/, writing one CSV per experiment into
build/acceptance/. Pass --quick to divide trial counts by 10 for a smoke run
(the CSVs then differ from the pinned full-scale ones).
"""

import argparse
import dataclasses
import json
import sys
import warnings
from pathlib import Path

from barlab.harness import (
    likelihood_ratio_audit,
    load_audit_config,
    load_config,
    run_experiment,
    theory_scale,
)

ROOT = Path(__file__).resolve().parents[1]
CONFIG_DIR = ROOT / "scripts" / "configs"

EXPERIMENTS = [
    "criterion1-osmd",
    "criterion2-find-best",
    "criterion3-pac-bar",
    "criterion4-rbar-sample",
    "criterion5-rbar-regret",
]


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--out-dir", default=str(ROOT / "build" / "acceptance"))
    parser.add_argument("--quick", action="store_true", help="1/10th of the trials")
    args = parser.parse_args()

    out_dir = Path(args.out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)

    for name in EXPERIMENTS:
        with warnings.catch_warnings():
            warnings.simplefilter("ignore", UserWarning)  # gap-0.15 instances warn
            config = load_config(str(CONFIG_DIR / f"{name}.json"))
            if args.quick:
                config = dataclasses.replace(config, trials=max(2, config.trials // 10))
            run = run_experiment(config, out_path=str(out_dir / f"{name}.csv"))
        print(f"== {name} ({config.algorithm}, {config.trials} trials)")
        for line in run.summary.format_lines():
            print("   " + line)
        scale = theory_scale(config)
        if scale is not None:
            expr, value = scale
            print(f"   theory scale:    {expr} = {value:.6g} (reported, not asserted)")
        print(f"   -> {out_dir / (name + '.csv')}")

    kwargs = load_audit_config(str(CONFIG_DIR / "audit-h1-vs-h3.json"))
    if args.quick:
        kwargs["trials"] = max(2, kwargs["trials"] // 10)
    result = likelihood_ratio_audit(**kwargs)
    print("== audit-h1-vs-h3")
    for line in result.format_lines():
        print("   " + line)
    (out_dir / "audit-h1-vs-h3.json").write_text(
        json.dumps(dataclasses.asdict(result), indent=2) + "\n", encoding="utf-8"
    )
    return 0 if result.passed else 1


if __name__ == "__main__":
    sys.exit(main())

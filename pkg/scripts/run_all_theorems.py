"""Run every registered theorem suite and print a status table.

    python scripts/run_all_theorems.py --trials 50 --seed 7 --jobs 4
"""
from __future__ import annotations

import argparse
import json
import sys
from dataclasses import asdict, dataclass

from jacsym.harness import THEOREMS, verify_theorem


@dataclass
class RunConfig:
    trials: int = 100
    seed: int = 0
    jobs: int = 1
    out: str = ""  # optional JSON file with the full reports


def parse(argv=None) -> RunConfig:
    cfg = RunConfig()
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    for k, v in asdict(cfg).items():
        p.add_argument(f"--{k}", type=type(v), default=v)
    return RunConfig(**vars(p.parse_args(argv)))


def main(argv=None) -> int:
    cfg = parse(argv)
    reports = []
    for name in THEOREMS:
        rep = verify_theorem(name, cfg.trials, cfg.seed, jobs=cfg.jobs)
        reports.append(rep.to_json(with_elapsed=True))
        print(f"{name:20s} {rep.status:8s} failures={len(rep.failures):3d} {rep.elapsed:7.1f}s", flush=True)
    if cfg.out:
        with open(cfg.out, "w") as fh:
            json.dump({"config": asdict(cfg), "reports": reports}, fh, indent=2, sort_keys=True)
    return 1 if any(r["status"] == "FAIL" for r in reports) else 0


if __name__ == "__main__":
    sys.exit(main())

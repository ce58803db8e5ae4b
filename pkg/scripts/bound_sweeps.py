"""Run the entry-bound, Schur and norm sweeps and save one JSON report."""
import argparse
import json
import sys
import time
from dataclasses import asdict, dataclass, field

from eitlin import bounds


@dataclass
class SweepConfig:
    domination_m: int = 500
    domination_j: int = 50
    gronwall_m: int = 200
    gronwall_j: int = 20
    gronwall_step: float = 0.01
    schur_M: int = 2000
    schur_j: int = 100
    norm_sizes: list = field(default_factory=lambda: [100, 500, 2000])
    norm_j: int = 50
    norm_iters: int = 200


def run(cfg: SweepConfig) -> dict:
    out = {"config": asdict(cfg)}
    jobs = {
        "domination": lambda: bounds.domination_sweep(cfg.domination_m, cfg.domination_j),
        "gronwall": lambda: bounds.gronwall_sweep(cfg.gronwall_m, cfg.gronwall_j, cfg.gronwall_step),
        "schur": lambda: bounds.schur_sweep(cfg.schur_M, cfg.schur_j),
        "norm": lambda: bounds.norm_sweep(tuple(cfg.norm_sizes), cfg.norm_j, cfg.norm_iters),
    }
    for name, job in jobs.items():
        t0 = time.perf_counter()
        rep = job()
        out[name] = rep.to_dict() | {"seconds": round(time.perf_counter() - t0, 2)}
        print(f"{name:10s} ok={rep.ok} margins={rep.margins}", flush=True)
    return out


def main() -> int:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--quick", action="store_true", help="reduced ranges for a smoke run")
    ap.add_argument("-o", "--out", default="bound_sweeps.json")
    args = ap.parse_args()
    cfg = SweepConfig()
    if args.quick:
        cfg = SweepConfig(100, 10, 50, 5, 0.05, 300, 10, [100, 300], 10, 100)
    report = run(cfg)
    with open(args.out, "w") as fh:
        json.dump(report, fh, indent=2, default=float)
    ok = all(report[k]["pass"] and all(report[k]["pass"].values()) for k in ("domination", "gronwall", "schur", "norm"))
    return 0 if ok else 1


if __name__ == "__main__":
    sys.exit(main())

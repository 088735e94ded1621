"""Run the masking report for every scheme/dimension pair and write one JSON file."""

from __future__ import annotations

import argparse
import json
from dataclasses import asdict, dataclass, field

from qmask.maskers import MaskScheme, SchemeId
from qmask.verify import DEFAULT_TOL, masking_report, no_masking_demo


@dataclass
class SweepConfig:
    dims: tuple[int, ...] = (2, 3, 4, 5, 6, 7)
    trials: int = 50
    seed: int = 0
    tolerance: float = DEFAULT_TOL
    schemes: tuple[str, ...] = field(default_factory=lambda: tuple(s.value for s in SchemeId))


def sweep(cfg: SweepConfig) -> dict:
    reports = []
    for name in cfg.schemes:
        for d in cfg.dims:
            if name == SchemeId.FOUR_LITERAL_QUTRIT.value and d != 3:
                continue
            rep = masking_report(MaskScheme(SchemeId(name), d), cfg.trials, cfg.seed, cfg.tolerance)
            reports.append(rep.to_dict())
            status = "pass" if rep.passed else "FAIL"
            worst = max(rep.per_site_max_trace_distance.values())
            print(f"{name:>20s} d={d}: {status}  worst marginal {worst:.3e}")
    return {"config": asdict(cfg), "reports": reports, "no_masking_demo": no_masking_demo().to_dict()}


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--out", default="reports.json")
    parser.add_argument("--trials", type=int, default=SweepConfig.trials)
    parser.add_argument("--seed", type=int, default=SweepConfig.seed)
    parser.add_argument("--dims", type=int, nargs="+", default=list(SweepConfig.dims))
    args = parser.parse_args()
    result = sweep(SweepConfig(dims=tuple(args.dims), trials=args.trials, seed=args.seed))
    with open(args.out, "w") as fh:
        json.dump(result, fh, indent=2)
    print(f"wrote {args.out}")


if __name__ == "__main__":
    main()

"""Success rates of orthogonal and sharp chains over a grid of rank pairs.

Each cell samples random pairs with the given ranks in dimension N and counts
how often a validating chain of length at most three is returned.  Failures
are tallied by the capacity case that raised.
"""
from __future__ import annotations

import argparse
from collections import Counter
from dataclasses import dataclass

import numpy as np

from grassgap.errors import CapacityExhausted
from grassgap.projection import random_projection
from grassgap.relations import AdmissibilityModel, perp_chain, sharp_chain, validate_chain


@dataclass
class ScanConfig:
    N: int = 16
    margin: int = 4
    trials: int = 10
    field: str = "real"
    seed: int = 0


def run(cfg: ScanConfig):
    model = AdmissibilityModel(cfg.N, cfg.margin)
    rng = np.random.default_rng(cfg.seed)
    ranks = range(cfg.margin, cfg.N - cfg.margin + 1)
    table, causes = {}, Counter()
    for r1 in ranks:
        for r2 in ranks:
            ok = {"perp": 0, "sharp": 0}
            for _ in range(cfg.trials):
                p = random_projection(cfg.N, r1, rng, cfg.field)
                q = random_projection(cfg.N, r2, rng, cfg.field)
                for label, build in (("perp", perp_chain), ("sharp", sharp_chain)):
                    try:
                        ok[label] += validate_chain(build(p, q, model), model)
                    except CapacityExhausted as exc:
                        causes[f"{label}:{exc.case}"] += 1
            table[r1, r2] = ok
    return list(ranks), table, causes


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--N", type=int, default=ScanConfig.N)
    parser.add_argument("--margin", type=int, default=ScanConfig.margin)
    parser.add_argument("--trials", type=int, default=ScanConfig.trials)
    parser.add_argument("--field", choices=("real", "complex"), default=ScanConfig.field)
    parser.add_argument("--seed", type=int, default=ScanConfig.seed)
    cfg = ScanConfig(**vars(parser.parse_args()))
    ranks, table, causes = run(cfg)
    for label in ("perp", "sharp"):
        print(f"{label} chains, successes out of {cfg.trials} (rows rank P, columns rank Q)")
        print("     " + "".join(f"{r:>4}" for r in ranks))
        for r1 in ranks:
            print(f"{r1:>4} " + "".join(f"{table[r1, r2][label]:>4}" for r2 in ranks))
    print("failures by case:", dict(causes))


if __name__ == "__main__":
    main()

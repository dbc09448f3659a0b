"""Recover hidden gap isometries from sampled input/output pairs.

For each map kind a random unitary is drawn, the map is treated as a black
box, and the classifier's kind and held-out action error are reported.
"""
from __future__ import annotations

import argparse
from dataclasses import dataclass

import numpy as np

from grassgap.isometry import (
    IsometrySpec,
    action_error,
    apply_isometry,
    classify_map,
    kinds_for,
    sample_projections,
)
from grassgap.projection import random_unitary


@dataclass
class ClassifyConfig:
    n: int = 6
    field: str = "complex"
    trials: int = 5
    samples: int = 6
    seed: int = 0


def run(cfg: ClassifyConfig) -> list:
    rng = np.random.default_rng(cfg.seed)
    rows = []
    for kind in kinds_for(cfg.field):
        correct, worst = 0, 0.0
        for _ in range(cfg.trials):
            hidden = IsometrySpec(kind, random_unitary(cfg.n, rng, cfg.field))
            report = classify_map(lambda p: apply_isometry(hidden, p), cfg.n, cfg.field,
                                  cfg.samples, int(rng.integers(2**31)))
            correct += report.spec.kind is hidden.kind
            probes = sample_projections(cfg.n, 5, rng, cfg.field)
            worst = max(worst, action_error(report.spec, hidden, probes))
        rows.append((kind.value, correct, worst))
    return rows


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--n", type=int, default=ClassifyConfig.n)
    parser.add_argument("--field", choices=("real", "complex"), default=ClassifyConfig.field)
    parser.add_argument("--trials", type=int, default=ClassifyConfig.trials)
    parser.add_argument("--samples", type=int, default=ClassifyConfig.samples)
    parser.add_argument("--seed", type=int, default=ClassifyConfig.seed)
    cfg = ClassifyConfig(**vars(parser.parse_args()))
    print(f"{'kind':<24} {'correct':>8} {'held-out action error':>22}")
    for kind, correct, worst in run(cfg):
        print(f"{kind:<24} {correct:>4}/{cfg.trials:<3} {worst:>22.3e}")


if __name__ == "__main__":
    main()

"""Exact versus Lloyd quantizers on random channels: mutual information lost
by each, and how often Lloyd finds the optimum."""
import argparse
from dataclasses import dataclass

import numpy as np

from impurity_clustering.channel import Channel, design_quantizer
from impurity_clustering.io import fmt


@dataclass
class Config:
    channels: int = 100
    d: int = 3
    n: int = 8
    k: int = 3
    restarts: int = 5
    seed: int = 0


def main(cfg: Config):
    rng = np.random.default_rng(cfg.seed)
    gaps = []
    hits = 0
    for i in range(cfg.channels):
        ch = Channel.random(cfg.d, cfg.n, rng)
        exact = design_quantizer(ch, cfg.k)
        lloyd = design_quantizer(ch, cfg.k, method="lloyd", restarts=cfg.restarts, seed=i)
        gaps.append(exact.mi - lloyd.mi)
        hits += gaps[-1] <= 1e-9
    gaps = np.array(gaps)
    print(f"channels {cfg.channels} d {cfg.d} n {cfg.n} k {cfg.k} restarts {cfg.restarts}")
    print("lloyd optimal fraction", fmt(hits / cfg.channels))
    print("mean MI gap (bits)", fmt(gaps.mean()), "max", fmt(gaps.max()))


if __name__ == "__main__":
    ap = argparse.ArgumentParser(description=__doc__)
    for name, default in vars(Config()).items():
        ap.add_argument("--" + name.replace("_", "-"), type=type(default), default=default)
    main(Config(**vars(ap.parse_args())))

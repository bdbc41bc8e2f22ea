"""Print the closed-form constants of the hardness argument next to their
brute-force counterparts."""
import argparse
import math
from dataclasses import dataclass

from impurity_clustering.io import fmt
from impurity_clustering.reductions import eta_value, kappa_value
from impurity_clustering.verify import (
    DEGREE_ENTROPIES,
    entropy,
    star_formula,
    verify_star_lower_bound,
    verify_three_edge_fact,
)


@dataclass
class Config:
    p_max: int = 7
    epsilons: tuple = (0.05, 0.1, 0.2, 0.5, 1.0)


def main(cfg: Config):
    print("# p, min impurity over 3-bounded triangle-free p-edge sets, 2p + p log2 p")
    rep = verify_star_lower_bound(range(2, cfg.p_max + 1))
    for p, (value, edges) in rep.details["minima"].items():
        print(p, fmt(value), fmt(star_formula(p)), edges)
    r3 = verify_three_edge_fact()
    print("# non-star 3-edge minimum", fmt(r3.details["minimum"]), "2+6log2(3) =", fmt(2 + 6 * math.log2(3)))
    print("# degree distributions: entropy, 1 + log2(p)/2")
    for name, (counts, total, _) in DEGREE_ENTROPIES.items():
        print(name, fmt(entropy([c / total for c in counts])), fmt(1 + math.log2(total // 2) / 2))
    print("# epsilon, eta")
    for eps in cfg.epsilons:
        print(fmt(eps), fmt(eta_value(eps)))
    print("# kappa(5, 12) =", fmt(kappa_value(5, 12)))


if __name__ == "__main__":
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--p-max", type=int, default=Config.p_max)
    main(Config(p_max=ap.parse_args().p_max))

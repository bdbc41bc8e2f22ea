"""Deterministic quantization of discrete memoryless channel outputs.

Output y of a channel with prior p_x and transition P_{y|x} becomes the vector
v^(y)_x = p_x P_{y|x}. A deterministic quantizer is a partition of the outputs,
and its mutual information is

    I(X; Z) = H(X) - sum_z entropy_impurity(sum of v^(y) over y in group z),

so maximizing I(X; Z) is minimum-impurity clustering of the lifted vectors.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .core import Clustering, Instance, entropy_impurity, group_sums
from .errors import DomainError, InvariantError
from .solvers import DEFAULT_BUDGET, solve_exact, solve_multistart

VALIDATION_TOL = 1e-9
IDENTITY_TOL = 1e-9


@dataclass(frozen=True, eq=False)
class Channel:
    """Input prior (length d) and row-stochastic transition matrix (d x n)."""

    prior: np.ndarray
    transition: np.ndarray

    def __post_init__(self):
        prior = np.array(self.prior, dtype=float)
        trans = np.array(self.transition, dtype=float)
        if prior.ndim != 1 or trans.ndim != 2 or trans.shape[0] != prior.size or prior.size == 0 or trans.shape[1] == 0:
            raise DomainError(f"prior shape {prior.shape} does not match transition shape {trans.shape}")
        if not (np.all(np.isfinite(prior)) and np.all(np.isfinite(trans))):
            raise DomainError("channel entries must be finite")
        if np.any(prior < 0) or np.any(trans < 0):
            raise DomainError("channel entries must be nonnegative")
        if abs(prior.sum() - 1.0) > VALIDATION_TOL:
            raise DomainError(f"prior sums to {prior.sum()!r}, expected 1")
        rows = trans.sum(axis=1)
        bad = np.flatnonzero(np.abs(rows - 1.0) > VALIDATION_TOL)
        if bad.size:
            raise DomainError(f"transition row {int(bad[0])} sums to {rows[bad[0]]!r}, expected 1")
        prior = prior / prior.sum()
        trans = trans / rows[:, None]
        prior.setflags(write=False)
        trans.setflags(write=False)
        object.__setattr__(self, "prior", prior)
        object.__setattr__(self, "transition", trans)

    @property
    def d(self) -> int:
        return self.prior.size

    @property
    def n(self) -> int:
        return self.transition.shape[1]

    @classmethod
    def random(cls, d: int, n: int, rng: np.random.Generator) -> "Channel":
        return cls(rng.dirichlet(np.ones(d)), rng.dirichlet(np.ones(n), size=d))


@dataclass(frozen=True)
class Quantizer:
    map: tuple
    k: int

    def __post_init__(self):
        # Reuse Clustering's label validation.
        c = Clustering(self.map, self.k)
        object.__setattr__(self, "map", c.assignment)
        object.__setattr__(self, "k", c.k)

    def as_clustering(self) -> Clustering:
        return Clustering(self.map, self.k)


class QuantizerDesign(NamedTuple):
    quantizer: Quantizer
    mi: float
    delta: float


def entropy_bits(p) -> float:
    p = np.asarray(p, dtype=float)
    nz = p[p > 0]
    return float(-np.sum(nz * np.log2(nz)))


def lift_to_vectors(ch: Channel) -> Instance:
    return Instance((ch.prior[:, None] * ch.transition).T)


def _mi_direct(prior: np.ndarray, trans: np.ndarray) -> float:
    """sum_x sum_z p_x T_{z|x} log2(T_{z|x} / P(z)), zero terms dropped."""
    joint = prior[:, None] * trans
    pz = joint.sum(axis=0)
    mask = joint > 0
    ratio = np.divide(trans, pz[None, :], out=np.ones_like(trans), where=mask)
    val = float(np.sum(np.where(mask, joint * np.log2(ratio), 0.0)))
    return max(val, 0.0)


def mutual_information_xy(ch: Channel) -> float:
    return _mi_direct(ch.prior, ch.transition)


def _check_quantizer(ch, q) -> Quantizer:
    if not isinstance(q, Quantizer):
        labels = [int(a) for a in q]
        q = Quantizer(tuple(labels), max(labels, default=0) + 1)
    if len(q.map) != ch.n:
        raise DomainError(f"quantizer maps {len(q.map)} outputs, channel has {ch.n}")
    return q


def mi_via_impurity(ch: Channel, q) -> float:
    """H(X) minus the impurity of the quantizer's groups of lifted vectors."""
    q = _check_quantizer(ch, q)
    sums = group_sums(lift_to_vectors(ch), q.as_clustering())
    return entropy_bits(ch.prior) - sum(entropy_impurity(row) for row in sums)


def mutual_information_xz(ch: Channel, q) -> float:
    """I(X; Z) from T_{z|x}; cross-checked against the impurity identity."""
    q = _check_quantizer(ch, q)
    T = np.zeros((ch.d, q.k))
    for y, z in enumerate(q.map):
        T[:, z] += ch.transition[:, y]
    direct = _mi_direct(ch.prior, T)
    via = mi_via_impurity(ch, q)
    if abs(direct - via) > IDENTITY_TOL:
        raise InvariantError(f"direct I(X;Z)={direct!r} disagrees with impurity identity {via!r}")
    return direct


def design_quantizer(
    ch: Channel,
    k: int,
    method: str = "exact",
    seed: int = 0,
    restarts: int = 1,
    max_iters: int = 100,
    budget: int = DEFAULT_BUDGET,
) -> QuantizerDesign:
    """Quantizer from a minimum-impurity clustering of the lifted outputs.

    ``method`` is "exact" or "lloyd" (best of ``restarts`` seeded Lloyd runs).
    Outputs with zero lifted mass go to group 0.
    """
    if k < 1 or k > ch.n:
        raise DomainError(f"need 1 <= k <= n={ch.n}, got {k}")
    inst = lift_to_vectors(ch)
    if method == "exact":
        res = solve_exact(inst, k, budget=budget)
    elif method == "lloyd":
        res = solve_multistart(inst, k, restarts=restarts, seed=seed, max_iters=max_iters)
    else:
        raise DomainError(f"unknown method {method!r}")
    labels = list(res.clustering.assignment)
    for y in np.flatnonzero(inst.vectors.sum(axis=1) == 0):
        labels[y] = 0
    quant = Quantizer(tuple(labels), k)
    mi = mutual_information_xz(ch, quant)
    delta = mutual_information_xy(ch) - mi
    if delta < -IDENTITY_TOL:
        raise InvariantError(f"negative quantization loss {delta!r}")
    return QuantizerDesign(quant, mi, max(delta, 0.0))


def quantization_loss_via_impurity(ch: Channel, q) -> float:
    """sum_z I(C_z) - sum_y I(v^(y)); equals I(X;Y) - I(X;Z)."""
    q = _check_quantizer(ch, q)
    inst = lift_to_vectors(ch)
    sums = group_sums(inst, q.as_clustering())
    return sum(entropy_impurity(r) for r in sums) - sum(entropy_impurity(r) for r in inst.vectors)

"""Exact and heuristic solvers for minimum entropy-impurity clustering."""
from __future__ import annotations

import enum
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np

from .core import Clustering, Instance, clustering_impurity, entropy_impurity, group_sums
from .errors import DomainError, ResourceError

DEFAULT_BUDGET = 10_000_000
TIE_TOL = 1e-9


class Method(enum.Enum):
    EXACT = "exact"
    LLOYD = "lloyd"
    MULTISTART = "multistart"


@dataclass(frozen=True)
class SolveResult:
    clustering: Clustering
    objective: float
    method: Method
    iterations: int
    seed: int | None = None
    history: tuple = field(default=(), compare=False)


@lru_cache(maxsize=None)
def stirling2(n: int, j: int) -> int:
    if n == j:
        return 1
    if j == 0 or j > n:
        return 0
    return j * stirling2(n - 1, j) + stirling2(n - 1, j - 1)


def count_partitions(n: int, k: int) -> int:
    """Number of partitions of n labelled items into at most k nonempty blocks."""
    return sum(stirling2(n, j) for j in range(1, min(k, n) + 1))


def enumerate_partitions(n: int, k: int):
    """Yield restricted-growth strings of length n using at most k blocks, in lexicographic order."""
    if n == 0:
        yield ()
        return
    labels = [0] * n

    def rec(i, used):
        if i == n:
            yield tuple(labels)
            return
        for g in range(min(used + 1, k)):
            labels[i] = g
            yield from rec(i + 1, max(used, g + 1))

    yield from rec(1, 1)


def _check_k(k):
    if int(k) != k or k < 1:
        raise DomainError(f"k must be a positive integer, got {k!r}")
    return int(k)


def solve_exact(inst: Instance, k: int, budget: int = DEFAULT_BUDGET) -> SolveResult:
    """Globally optimal clustering into at most k groups.

    Walks restricted-growth strings in lexicographic order, pruning with the
    bound partial + sum of remaining item impurities (adding a vector to a
    group raises its impurity by at least the vector's own impurity). The
    first optimum met is kept, so ties resolve to the smallest assignment.
    Raises ResourceError when the raw partition count exceeds ``budget``.
    """
    k = _check_k(k)
    n = inst.n
    total = count_partitions(n, k)
    if total > budget:
        raise ResourceError(f"{total} partitions of {n} items into <= {k} groups exceeds budget {budget}")

    X = inst.vectors
    own = np.array([entropy_impurity(x) for x in X])
    tail = np.concatenate([np.cumsum(own[::-1])[::-1], [0.0]])

    best_val = float("inf")
    best_labels = None
    labels = [0] * n
    sums: list[np.ndarray] = []
    imps: list[float] = []
    visited = 0

    def rec(i, partial):
        nonlocal best_val, best_labels, visited
        visited += 1
        if i == n:
            if partial < best_val - TIE_TOL:
                best_val = partial
                best_labels = tuple(labels)
            return
        if partial + tail[i] >= best_val - TIE_TOL:
            return
        x = X[i]
        for g in range(len(sums)):
            old_sum, old_imp = sums[g], imps[g]
            new_sum = old_sum + x
            new_imp = entropy_impurity(new_sum)
            labels[i] = g
            sums[g], imps[g] = new_sum, new_imp
            rec(i + 1, partial - old_imp + new_imp)
            sums[g], imps[g] = old_sum, old_imp
        if len(sums) < k:
            labels[i] = len(sums)
            sums.append(x.copy())
            imps.append(own[i])
            rec(i + 1, partial + own[i])
            sums.pop()
            imps.pop()

    rec(0, 0.0)
    clustering = Clustering(best_labels, k)
    return SolveResult(clustering, clustering_impurity(inst, clustering), Method.EXACT, visited)


def _kl_rows(P: np.ndarray, C: np.ndarray) -> np.ndarray:
    """Matrix of KL(P[i], C[j]) in nats, +inf on support violations."""
    n, k = P.shape[0], C.shape[0]
    out = np.zeros((n, k))
    pos = P > 0
    with np.errstate(divide="ignore", invalid="ignore"):
        logp = np.where(pos, np.log(np.where(pos, P, 1.0)), 0.0)
        for j in range(k):
            c = C[j]
            bad = (pos & (c == 0)).any(axis=1)
            logc = np.where(c > 0, np.log(np.where(c > 0, c, 1.0)), 0.0)
            out[:, j] = np.where(bad, np.inf, np.sum(np.where(pos, P * (logp - logc), 0.0), axis=1))
    return out


def solve_lloyd(
    inst: Instance,
    k: int,
    seed: int = 0,
    max_iters: int = 100,
    tol: float = 1e-9,
) -> SolveResult:
    """Lloyd iterations with KL assignment and mass-weighted centroids.

    Items are normalized to distributions for the assignment step; each
    centroid is its group's normalized vector sum, which for unit-mass items
    is the plain mean. The reported objective is always the impurity of the
    original vectors and never increases between iterations.
    """
    k = min(_check_k(k), inst.n)
    if max_iters < 0:
        raise DomainError("max_iters must be nonnegative")
    X = inst.vectors
    n = inst.n
    mass = X.sum(axis=1)
    P = np.divide(X, mass[:, None], out=np.zeros_like(X), where=mass[:, None] > 0)

    rng = np.random.default_rng(seed)
    labels = rng.integers(0, k, size=n)
    obj = clustering_impurity(inst, Clustering(tuple(labels), k))
    history = [obj]
    iters = 0

    for _ in range(max_iters):
        iters += 1
        labels = _repair_empty(X, P, mass, labels, k)
        sums = group_sums(inst, Clustering(tuple(labels), k))
        norms = sums.sum(axis=1)
        C = np.divide(sums, norms[:, None], out=np.zeros_like(sums), where=norms[:, None] > 0)
        D = _kl_rows(P, C)
        current = D[np.arange(n), labels]
        best = D.argmin(axis=1)
        move = D[np.arange(n), best] < current - 1e-12
        new_labels = np.where(move, best, labels)
        new_obj = clustering_impurity(inst, Clustering(tuple(new_labels), k))
        improved = obj - new_obj
        labels, obj = new_labels, new_obj
        history.append(obj)
        if improved < tol:
            break

    return SolveResult(Clustering(tuple(int(a) for a in labels), k), obj, Method.LLOYD, iters, seed, tuple(history))


def _repair_empty(X, P, mass, labels, k):
    """Move the costliest item (mass * KL to its centroid) into each empty group."""
    labels = labels.copy()
    for j in range(k):
        counts = np.bincount(labels, minlength=k)
        if counts[j]:
            continue
        sums = np.zeros((k, X.shape[1]))
        np.add.at(sums, labels, X)
        norms = sums.sum(axis=1)
        C = np.divide(sums, norms[:, None], out=np.zeros_like(sums), where=norms[:, None] > 0)
        own = _kl_rows(P, C)[np.arange(len(labels)), labels] * mass
        own[counts[labels] < 2] = -np.inf
        labels[int(np.argmax(own))] = j
    return labels


def restart_seeds(seed: int, restarts: int) -> list[int]:
    """The first seed is the master seed itself; later ones are derived from it."""
    seeds = [int(seed)]
    for r in range(1, restarts):
        seeds.append(int(np.random.SeedSequence([int(seed), r]).generate_state(1)[0]))
    return seeds


def solve_multistart(
    inst: Instance,
    k: int,
    restarts: int = 10,
    seed: int = 0,
    max_iters: int = 100,
    tol: float = 1e-9,
) -> SolveResult:
    if restarts < 1:
        raise DomainError("restarts must be >= 1")
    best = None
    total_iters = 0
    for s in restart_seeds(seed, restarts):
        res = solve_lloyd(inst, k, seed=s, max_iters=max_iters, tol=tol)
        total_iters += res.iterations
        if best is None or res.objective < best.objective - TIE_TOL:
            best = res
    return SolveResult(best.clustering, best.objective, Method.MULTISTART, total_iters, best.seed, best.history)


def solve(inst: Instance, k: int, method: str = "exact", **kw) -> SolveResult:
    method = Method(method)
    if method is Method.EXACT:
        return solve_exact(inst, k, **{key: kw[key] for key in ("budget",) if key in kw})
    lloyd_kw = {key: kw[key] for key in ("seed", "max_iters", "tol") if key in kw}
    if method is Method.LLOYD:
        return solve_lloyd(inst, k, **lloyd_kw)
    return solve_multistart(inst, k, restarts=kw.get("restarts", 10), **lloyd_kw)

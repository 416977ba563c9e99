"""Non-dominated sorting GA with crowding-distance survival on binary knapsack selections."""

from __future__ import annotations

from typing import Callable, Sequence

import numpy as np

from ..core import weakly_better
from ..momkp import MomkpInstance
from .archive import Archive
from .operators import Problem, SolverParams, tournament_lex, variation


def domination_matrix(F: np.ndarray) -> np.ndarray:
    """``D[i, j]`` is True when row i dominates row j (maximisation)."""
    ge = weakly_better(F, F)
    return ge & ~ge.T


def nondominated_ranks(F: np.ndarray) -> np.ndarray:
    """Front index of every row, 0 for the non-dominated front."""
    F = np.asarray(F, dtype=float)
    D = domination_matrix(F)
    count = D.sum(axis=0)
    rank = np.full(len(F), -1, dtype=np.int64)
    current = np.flatnonzero(count == 0)
    r = 0
    while current.size:
        rank[current] = r
        count = count - D[current].sum(axis=0)
        count[current] = -1
        current = np.flatnonzero(count == 0)
        r += 1
    return rank


def crowding_distance(F: np.ndarray) -> np.ndarray:
    """Crowding distance within one front; boundary rows get infinity."""
    n, k = F.shape
    dist = np.zeros(n)
    if n <= 2:
        dist[:] = np.inf
        return dist
    for j in range(k):
        order = np.argsort(F[:, j], kind="stable")
        col = F[order, j]
        span = col[-1] - col[0]
        dist[order[0]] = dist[order[-1]] = np.inf
        if span > 0:
            dist[order[1:-1]] += (col[2:] - col[:-2]) / span
    return dist


def rank_and_crowd(F: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    rank = nondominated_ranks(F)
    crowd = np.zeros(len(F))
    for r in range(rank.max() + 1):
        idx = np.flatnonzero(rank == r)
        crowd[idx] = crowding_distance(F[idx])
    return rank, crowd


def survive(F: np.ndarray, size: int) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Indices of the ``size`` best rows by (rank, crowding), with their rank and crowding."""
    rank, crowd = rank_and_crowd(F)
    order = np.lexsort((-crowd, rank))[:size]
    return order, rank[order], crowd[order]


def _check_mask(mask: Sequence[int], p: int) -> list[int]:
    mask = list(mask)
    if len(mask) < 2:
        raise ValueError("a multiobjective run needs at least two objectives")
    if len(set(mask)) != len(mask) or not all(0 <= k < p for k in mask):
        raise ValueError(f"invalid objective mask {mask} for p={p}")
    return mask


def unique_rows(X: np.ndarray, F: np.ndarray) -> np.ndarray:
    """Indices of the first occurrence of each distinct objective vector
    (``X`` rows go along with ``F`` and are not inspected)."""
    _, first = np.unique(F, axis=0, return_index=True)
    return np.sort(first)


def nsga2_run(
    inst: MomkpInstance,
    mask: Sequence[int],
    params: SolverParams,
    initial: np.ndarray | None = None,
    origin: str = "nsga2",
    rng: np.random.Generator | None = None,
    on_generation: Callable[[np.ndarray, np.ndarray], None] | None = None,
) -> Archive:
    """Run the GA on the objectives in ``mask``; returns the final first front.

    The front is taken under the masked objectives and stored with all
    profits. ``initial`` rows, when given, replace the first random members.
    """
    mask = _check_mask(mask, inst.p)
    rng = rng if rng is not None else np.random.default_rng(params.seed)
    problem = Problem(inst, rng)
    N = params.population
    X = problem.random_population(N)
    if initial is not None and len(initial):
        X[: len(initial)] = np.asarray(initial, dtype=bool)[:N]
    F = problem.evaluate(X)
    _, rank, crowd = survive(F[:, mask], N)
    for _ in range(params.generations):
        parents = tournament_lex(rank, crowd, N, rng)
        children = variation(X, parents[0::2], parents[1::2], params, problem)
        FC = problem.evaluate(children)
        X = np.concatenate([X, children])
        F = np.concatenate([F, FC])
        if on_generation is not None:
            on_generation(X, F[:, mask])
        keep, rank, crowd = survive(F[:, mask], N)
        X, F = X[keep], F[keep]
    front = np.flatnonzero(rank == 0)
    front = front[unique_rows(X[front], F[front])]
    return Archive(X[front], F[front], [origin] * len(front), None)

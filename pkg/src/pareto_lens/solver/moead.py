"""Decomposition-based GA (weighted Tchebycheff) with an external non-dominated archive.

Offspring are produced for all subproblems at once and then offered to every
subproblem in the producing subproblem's neighbourhood.
"""

from __future__ import annotations

from math import comb
from typing import Sequence

import numpy as np

from ..core import nondominated_mask, weakly_better
from ..momkp import MomkpInstance
from .archive import Archive
from .nsga2 import _check_mask
from .operators import Problem, SolverParams, variation

MIN_WEIGHT = 1e-6


def simplex_lattice(k: int, h: int) -> np.ndarray:
    """All k-dimensional weight vectors with components in {0, 1/h, ..., 1} summing to 1."""
    if k == 1:
        return np.ones((1, 1))
    rows = []

    def rec(prefix, left, depth):
        if depth == k - 1:
            rows.append(prefix + [left])
            return
        for v in range(left + 1):
            rec(prefix + [v], left - v, depth + 1)

    rec([], h, 0)
    return np.array(rows, dtype=float) / h


def weight_vectors(k: int, size: int, rng: np.random.Generator) -> np.ndarray:
    """The largest uniform lattice not exceeding ``size``, topped up with random simplex points."""
    h = 1
    while comb(h + 1 + k - 1, k - 1) <= size:
        h += 1
    lattice = simplex_lattice(k, h)
    extra = size - len(lattice)
    if extra > 0:
        lattice = np.concatenate([lattice, rng.dirichlet(np.ones(k), extra)])
    return lattice


def neighbourhoods(weights: np.ndarray, t: int) -> np.ndarray:
    d = np.linalg.norm(weights[:, None, :] - weights[None, :, :], axis=2)
    t = min(t, len(weights))
    return np.argsort(d, axis=1, kind="stable")[:, :t]


def tchebycheff(F: np.ndarray, weights: np.ndarray, ideal: np.ndarray) -> np.ndarray:
    """Scalarised cost (lower is better) of every row of F for every weight: shape (len(F), len(weights))."""
    gap = ideal[None, :] - F
    return np.max(np.maximum(weights, MIN_WEIGHT)[None, :, :] * gap[:, None, :], axis=2)


def _update_archive(AX, AF, X, F, cols):
    """Merge selections ``X`` with full profits ``F`` into the archive (AX, AF).

    Dominance is judged on ``cols`` only; a newcomer equal to a member is dropped.
    """
    fresh = nondominated_mask(F[:, cols])
    X, F = X[fresh], F[fresh]
    if len(AF) and len(F):
        old, new = AF[:, cols], F[:, cols]
        covered = weakly_better(old, new).any(axis=0)
        X, F, new = X[~covered], F[~covered], new[~covered]
        if len(F):
            beaten = weakly_better(new, old).any(axis=0)
            AX, AF = AX[~beaten], AF[~beaten]
    return np.concatenate([AX, X]), np.concatenate([AF, F])


def decomposition_run(
    inst: MomkpInstance,
    mask: Sequence[int],
    params: SolverParams,
    initial: np.ndarray | None = None,
    origin: str = "moead",
    rng: np.random.Generator | None = None,
    weights: np.ndarray | None = None,
) -> Archive:
    mask = _check_mask(mask, inst.p)
    rng = rng if rng is not None else np.random.default_rng(params.seed)
    problem = Problem(inst, rng)
    if weights is None:
        weights = weight_vectors(len(mask), params.population, rng)
    weights = np.atleast_2d(np.asarray(weights, dtype=float))
    if weights.shape[1] != len(mask):
        raise ValueError("weight vectors must have one entry per masked objective")
    N = len(weights)
    B = neighbourhoods(weights, params.neighbourhood)
    member = np.zeros((N, N), dtype=bool)  # member[s, j]: j in neighbourhood of s
    member[np.arange(N)[:, None], B] = True

    X = problem.random_population(N)
    if initial is not None and len(initial):
        X[: len(initial)] = np.asarray(initial, dtype=bool)[:N]
    Ffull = problem.evaluate(X)
    cols = list(mask)
    F = Ffull[:, cols]
    ideal = F.max(axis=0)
    AX, AF = _update_archive(np.zeros((0, inst.n), bool), np.zeros((0, inst.p)), X, Ffull, cols)

    generations = (params.evaluations - N) // N
    rows = np.arange(N)
    for _ in range(generations):
        pick = rng.integers(0, B.shape[1], (N, 2))
        # one child per subproblem: the first of each HUX pair
        children = variation(X, B[rows, pick[:, 0]], B[rows, pick[:, 1]], params, problem, both=False)
        CF_full = problem.evaluate(children)
        CF = CF_full[:, cols]
        ideal = np.maximum(ideal, CF.max(axis=0))
        # child c may replace subproblem j when j is in the neighbourhood c was bred in
        g_child = np.where(member, tchebycheff(CF, weights, ideal), np.inf)
        best = g_child.argmin(axis=0)
        g_best = g_child[best, rows]
        g_cur = np.max(np.maximum(weights, MIN_WEIGHT) * (ideal - F), axis=1)
        replace = g_best < g_cur
        X[replace] = children[best[replace]]
        F[replace] = CF[best[replace]]
        AX, AF = _update_archive(AX, AF, children, CF_full, cols)
    return Archive(AX, AF, [origin] * len(AX), None)

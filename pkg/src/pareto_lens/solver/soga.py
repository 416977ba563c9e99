"""Generational single-objective GA with one elite."""

from __future__ import annotations

import numpy as np

from ..momkp import MomkpInstance
from .archive import Archive
from .nsga2 import unique_rows
from .operators import Problem, SolverParams, tournament, variation


def soga(
    inst: MomkpInstance,
    objective: int,
    params: SolverParams,
    origin: str = "soga",
    rng: np.random.Generator | None = None,
) -> Archive:
    """Maximise one profit; returns the distinct best-of-run selections."""
    if not 0 <= objective < inst.p:
        raise ValueError(f"objective {objective} out of range for p={inst.p}")
    rng = rng if rng is not None else np.random.default_rng(params.seed)
    problem = Problem(inst, rng)
    N = params.population
    X = problem.random_population(N)
    F = problem.evaluate(X)
    for _ in range(params.generations):
        fit = F[:, objective]
        elite = int(fit.argmax())
        parents = tournament(fit, N, rng)
        children = variation(X, parents[0::2], parents[1::2], params, problem)
        FC = problem.evaluate(children)
        if FC[:, objective].max() < fit[elite]:
            worst = int(FC[:, objective].argmin())
            children[worst], FC[worst] = X[elite], F[elite]
        X, F = children, FC
    best = np.flatnonzero(F[:, objective] == F[:, objective].max())
    best = best[unique_rows(X[best], F[best])]
    return Archive(X[best], F[best], [origin] * len(best), None)

"""Binary GA operators and the knapsack evaluation context shared by all solvers."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from ..momkp import MomkpInstance, removal_order, repair_many


@dataclass(frozen=True)
class SolverParams:
    population: int = 200
    evaluations: int = 100_000
    crossover_rate: float = 1.0
    mutation_rate: float | None = None  # None: 1/n per bit
    seed: int = 0
    objective_mask: tuple[int, ...] | None = None
    neighbourhood: int = 20

    def __post_init__(self):
        if self.population < 2 or self.population % 2:
            raise ValueError("population must be an even number >= 2")
        if self.evaluations < self.population:
            raise ValueError("evaluation budget must cover the initial population")
        for name in ("crossover_rate", "mutation_rate"):
            v = getattr(self, name)
            if v is not None and not 0.0 <= v <= 1.0:
                raise ValueError(f"{name} must lie in [0, 1]")
        if self.neighbourhood < 1:
            raise ValueError("neighbourhood size must be positive")
        if self.objective_mask is not None:
            object.__setattr__(self, "objective_mask", tuple(int(k) for k in self.objective_mask))

    @property
    def generations(self) -> int:
        """Offspring generations after the initial population."""
        return (self.evaluations - self.population) // self.population


@dataclass
class Problem:
    """Evaluation, repair and budget bookkeeping for one run."""

    inst: MomkpInstance
    rng: np.random.Generator
    order: np.ndarray = field(init=False)
    evaluations: int = 0

    def __post_init__(self):
        self.order = removal_order(self.inst, self.rng)
        self._profits = self.inst.profits.astype(float)

    @property
    def n(self) -> int:
        return self.inst.n

    def evaluate(self, X: np.ndarray) -> np.ndarray:
        self.evaluations += len(X)
        # float matmul is exact for these integer magnitudes and much faster
        return (X.astype(float) @ self._profits).round()

    def repair(self, X: np.ndarray) -> np.ndarray:
        return repair_many(self.inst, X, self.order)

    def random_population(self, size: int) -> np.ndarray:
        return self.repair(self.rng.random((size, self.n)) < 0.5)


def hux(a, b, rng: np.random.Generator) -> tuple[np.ndarray, np.ndarray]:
    a = np.asarray(a, dtype=bool)
    b = np.asarray(b, dtype=bool)
    if a.shape != b.shape:
        raise ValueError("parents must have equal length")
    c1, c2 = hux_many(a[None, :], b[None, :], rng)
    return c1[0], c2[0]


def hux_many(A: np.ndarray, B: np.ndarray, rng: np.random.Generator) -> tuple[np.ndarray, np.ndarray]:
    """Half-uniform crossover on rows: swap a random half (rounded down) of the differing bits."""
    diff = A != B
    h = diff.sum(axis=1)
    keys = np.where(diff, rng.random(A.shape), 2.0)
    rank = np.argsort(np.argsort(keys, axis=1, kind="stable"), axis=1, kind="stable")
    swap = diff & (rank < (h // 2)[:, None])
    C1 = np.where(swap, B, A)
    C2 = np.where(swap, A, B)
    return C1, C2


def bit_flip(X: np.ndarray, rate: float, rng: np.random.Generator) -> np.ndarray:
    return X ^ (rng.random(X.shape) < rate)


def tournament(better: np.ndarray, size: int, rng: np.random.Generator) -> np.ndarray:
    """Binary tournament given a preference score (higher wins)."""
    a = rng.integers(0, len(better), size)
    b = rng.integers(0, len(better), size)
    return np.where(better[a] >= better[b], a, b)


def tournament_lex(primary: np.ndarray, secondary: np.ndarray, size: int, rng) -> np.ndarray:
    """Binary tournament: lower ``primary`` wins, then higher ``secondary``."""
    a = rng.integers(0, len(primary), size)
    b = rng.integers(0, len(primary), size)
    a_wins = (primary[a] < primary[b]) | ((primary[a] == primary[b]) & (secondary[a] >= secondary[b]))
    return np.where(a_wins, a, b)


def variation(
    X: np.ndarray,
    mothers: np.ndarray,
    fathers: np.ndarray,
    params: SolverParams,
    problem: Problem,
    both: bool = True,
) -> np.ndarray:
    """Crossover, mutation and repair for paired parents; two children per pair
    unless ``both`` is False."""
    rng = problem.rng
    A, B = X[mothers], X[fathers]
    C1, C2 = hux_many(A, B, rng)
    skip = rng.random(len(A)) >= params.crossover_rate
    C1[skip], C2[skip] = A[skip], B[skip]
    children = np.concatenate([C1, C2]) if both else C1
    rate = params.mutation_rate if params.mutation_rate is not None else 1.0 / problem.n
    return problem.repair(bit_flip(children, rate, rng))

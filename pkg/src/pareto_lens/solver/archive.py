from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from ..core import ApproximationSet, ObjectiveSpec, Solution, maximise_specs, nondominated_mask


@dataclass
class Archive:
    """Mutually non-dominated selections with their full profit vectors.

    ``objectives`` selects which columns take part in dominance checks;
    by default all of them.
    """

    X: np.ndarray
    F: np.ndarray
    origins: list[str] = field(default_factory=list)
    objectives: tuple[int, ...] | None = None

    @classmethod
    def empty(cls, n: int, p: int, objectives=None) -> "Archive":
        return cls(np.zeros((0, n), dtype=bool), np.zeros((0, p)), [], objectives)

    @classmethod
    def from_population(cls, X, F, origin: str, objectives=None) -> "Archive":
        arch = cls(np.asarray(X, dtype=bool), np.asarray(F, dtype=float), [origin] * len(X), objectives)
        return arch.filtered()

    def __len__(self) -> int:
        return len(self.X)

    def _cols(self, F):
        return F if self.objectives is None else F[:, list(self.objectives)]

    def filtered(self) -> "Archive":
        if len(self) == 0:
            return self
        keep = nondominated_mask(self._cols(self.F))
        return Archive(self.X[keep], self.F[keep], [o for o, k in zip(self.origins, keep) if k], self.objectives)

    def merge(self, *others: "Archive") -> "Archive":
        X = np.concatenate([self.X] + [o.X for o in others])
        F = np.concatenate([self.F] + [o.F for o in others])
        origins = list(self.origins)
        for o in others:
            origins.extend(o.origins)
        return Archive(X, F, origins, self.objectives).filtered()

    def to_set(self, specs: list[ObjectiveSpec] | None = None, instance_id: str = "") -> ApproximationSet:
        specs = specs or maximise_specs(self.F.shape[1])
        sols = (
            Solution(tuple(f), tuple(int(b) for b in x), origin)
            for x, f, origin in zip(self.X, self.F, self.origins)
        )
        return ApproximationSet(tuple(specs), tuple(sols), instance_id)

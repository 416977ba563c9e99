"""Global pairwise relationships between objectives via Kendall rank correlation."""

from __future__ import annotations

import enum
import itertools
import math
from dataclasses import dataclass

import numpy as np

from .core import ApproximationSet, InsufficientDataError

CONFLICT_CUTOFF = -0.5
HARMONY_CUTOFF = 0.5


class Relation(enum.Enum):
    CONFLICTING = "conflicting"
    HARMONIOUS = "harmonious"
    INDEPENDENT = "independent"


def classify(tau: float) -> Relation:
    # strict on both sides: |tau| == 0.5 is independent
    if tau < CONFLICT_CUTOFF:
        return Relation.CONFLICTING
    if tau > HARMONY_CUTOFF:
        return Relation.HARMONIOUS
    return Relation.INDEPENDENT


@dataclass(frozen=True)
class PairwiseRelation:
    i: int
    j: int
    tau: float
    kind: Relation

    def as_dict(self) -> dict:
        return {"i": self.i, "j": self.j, "tau": self.tau, "kind": self.kind.value}


def concordance_counts(x: np.ndarray, y: np.ndarray, chunk: int = 1024) -> tuple[int, int, int, int]:
    """Return (concordant, discordant, ties_in_x, ties_in_y) over unordered pairs.

    Rows are compared in blocks so memory stays at ``chunk * len(x)``.
    """
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    nc = nd = tx = ty = 0
    for start in range(0, len(x), chunk):
        stop = min(start + chunk, len(x))
        # rows start..stop against columns start.., keeping pairs with j > i
        sx = np.sign(x[start:stop, None] - x[None, start:])
        sy = np.sign(y[start:stop, None] - y[None, start:])
        upper = np.arange(stop - start)[:, None] < np.arange(len(x) - start)[None, :]
        prod = sx * sy
        nc += int(np.count_nonzero((prod > 0) & upper))
        nd += int(np.count_nonzero((prod < 0) & upper))
        tx += int(np.count_nonzero((sx == 0) & upper))
        ty += int(np.count_nonzero((sy == 0) & upper))
    return nc, nd, tx, ty


def tau_from_columns(x, y, variant: str = "a") -> float:
    n = len(x)
    if n < 2:
        raise InsufficientDataError("Kendall tau needs at least two solutions")
    nc, nd, tx, ty = concordance_counts(x, y)
    total = n * (n - 1) / 2
    if variant == "a":
        return (nc - nd) / total
    if variant == "b":
        denom = math.sqrt((total - tx) * (total - ty))
        return (nc - nd) / denom if denom > 0 else 0.0
    raise ValueError(f"unknown tau variant {variant!r}")


def kendall_tau(aset: ApproximationSet, i: int, j: int, variant: str = "a") -> float:
    """Kendall correlation between objectives ``i`` and ``j`` (0-based).

    ``variant="a"`` divides by the number of all unordered pairs, so tied pairs
    only dilute the value; ``"b"`` applies the usual tie correction.
    """
    if i == j:
        raise ValueError("objective indices must differ")
    m = aset.m
    if not (0 <= i < m and 0 <= j < m):
        raise IndexError(f"objective index out of range for m={m}")
    if len(aset) < 2:
        raise InsufficientDataError("Kendall tau needs at least two solutions")
    vals = aset.values()
    return tau_from_columns(vals[:, i], vals[:, j], variant)


def pairwise_matrix(aset: ApproximationSet, variant: str = "a") -> list[PairwiseRelation]:
    out = []
    for i, j in itertools.combinations(range(aset.m), 2):
        tau = kendall_tau(aset, i, j, variant)
        out.append(PairwiseRelation(i, j, tau, classify(tau)))
    return out


def tau_matrix(relations: list[PairwiseRelation], m: int) -> np.ndarray:
    mat = np.eye(m)
    for r in relations:
        mat[r.i, r.j] = mat[r.j, r.i] = r.tau
    return mat

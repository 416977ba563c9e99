"""Objective-space fundamentals: specs, solutions, dominance, filtering, normalisation."""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, replace
from typing import Iterable, Sequence

import numpy as np


class DimensionError(ValueError):
    """Raised when vectors and objective specs disagree in length."""


class InsufficientDataError(ValueError):
    """Raised when an operation needs more solutions than it was given."""


class Sense(enum.Enum):
    MAXIMISE = "max"
    MINIMISE = "min"


@dataclass(frozen=True)
class ObjectiveSpec:
    name: str
    sense: Sense = Sense.MAXIMISE

    def __post_init__(self):
        if not self.name:
            raise ValueError("objective name must be non-empty")

    @property
    def sign(self) -> int:
        # +1 when larger is better
        return 1 if self.sense is Sense.MAXIMISE else -1


def maximise_specs(m: int, prefix: str = "Z") -> list[ObjectiveSpec]:
    return [ObjectiveSpec(f"{prefix}{i + 1}") for i in range(m)]


@dataclass(frozen=True)
class Solution:
    objectives: tuple[float, ...]
    decision: tuple[int, ...] | None = None
    origin: str = ""

    def __post_init__(self):
        object.__setattr__(self, "objectives", tuple(float(v) for v in self.objectives))
        if self.decision is not None:
            object.__setattr__(self, "decision", tuple(int(b) for b in self.decision))
        if not all(math.isfinite(v) for v in self.objectives):
            raise ValueError(f"non-finite objective value in {self.objectives}")


@dataclass(frozen=True)
class ApproximationSet:
    specs: tuple[ObjectiveSpec, ...]
    solutions: tuple[Solution, ...] = ()
    instance_id: str = ""

    def __post_init__(self):
        object.__setattr__(self, "specs", tuple(self.specs))
        object.__setattr__(self, "solutions", tuple(self.solutions))
        names = [s.name for s in self.specs]
        if len(self.specs) < 2:
            raise DimensionError("an approximation set needs at least two objectives")
        if len(set(names)) != len(names):
            raise ValueError(f"duplicate objective names: {names}")
        m = len(self.specs)
        for sol in self.solutions:
            if len(sol.objectives) != m:
                raise DimensionError(
                    f"solution has {len(sol.objectives)} objectives, expected {m}"
                )

    @classmethod
    def from_values(
        cls,
        values: Iterable[Sequence[float]],
        specs: Sequence[ObjectiveSpec] | None = None,
        instance_id: str = "",
        origin: str = "",
    ) -> "ApproximationSet":
        rows = [tuple(v) for v in values]
        if specs is None:
            if not rows:
                raise DimensionError("cannot infer objective count from an empty set")
            specs = maximise_specs(len(rows[0]))
        return cls(tuple(specs), tuple(Solution(r, origin=origin) for r in rows), instance_id)

    @property
    def m(self) -> int:
        return len(self.specs)

    def __len__(self) -> int:
        return len(self.solutions)

    def __iter__(self):
        return iter(self.solutions)

    def values(self) -> np.ndarray:
        """Objective matrix, one row per solution."""
        if not self.solutions:
            return np.empty((0, self.m))
        return np.array([s.objectives for s in self.solutions], dtype=float)

    def signs(self) -> np.ndarray:
        return np.array([s.sign for s in self.specs], dtype=float)

    def with_solutions(self, solutions: Iterable[Solution]) -> "ApproximationSet":
        return replace(self, solutions=tuple(solutions))


def _check_dims(a: Sequence[float], b: Sequence[float], specs: Sequence[ObjectiveSpec]):
    if len(a) != len(specs) or len(b) != len(specs):
        raise DimensionError(
            f"vector lengths {len(a)}/{len(b)} do not match {len(specs)} objectives"
        )


def dominates(a: Sequence[float], b: Sequence[float], specs: Sequence[ObjectiveSpec]) -> bool:
    _check_dims(a, b, specs)
    strictly = False
    for x, y, spec in zip(a, b, specs):
        dx, dy = spec.sign * x, spec.sign * y
        if dx < dy:
            return False
        if dx > dy:
            strictly = True
    return strictly


_MATRIX_LIMIT = 1500


def weakly_better(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """``out[i, j]`` is True when row ``a[i]`` is >= row ``b[j]`` in every column."""
    out = a[:, None, 0] >= b[None, :, 0]
    for j in range(1, a.shape[1]):
        out &= a[:, None, j] >= b[None, :, j]
    return out


def nondominated_mask(values: np.ndarray, signs: np.ndarray | None = None) -> np.ndarray:
    """Boolean mask of the non-dominated rows of ``values``.

    Rows are maximised after multiplication by ``signs``. Of several identical
    surviving rows only the first occurrence is kept.
    """
    values = np.asarray(values, dtype=float)
    n = len(values)
    if n == 0:
        return np.zeros(0, dtype=bool)
    f = values if signs is None else values * signs
    if n <= _MATRIX_LIMIT:
        ge = weakly_better(f, f)
        dominated = (ge & ~ge.T).any(axis=0)
        # equal rows: only the earliest survives
        repeated = np.triu(ge & ge.T, k=1).any(axis=0)
        return ~(dominated | repeated)
    # lexicographically decreasing, stable: a row can only be dominated (or
    # duplicated) by rows visited before it
    order = np.lexsort(-f.T[::-1])
    kept = np.empty_like(f)
    k = 0
    keep = np.zeros(n, dtype=bool)
    for idx in order:
        row = f[idx]
        if k and np.any(np.all(kept[:k] >= row, axis=1)):
            continue
        kept[k] = row
        k += 1
        keep[idx] = True
    return keep


def nondominated_filter(aset: ApproximationSet) -> ApproximationSet:
    if len(aset) == 0:
        return aset
    keep = nondominated_mask(aset.values(), aset.signs())
    return aset.with_solutions(s for s, k in zip(aset.solutions, keep) if k)


def normalize_values(values: np.ndarray, signs: np.ndarray) -> np.ndarray:
    """Min-max map each column to [0, 1] with 1 always best; constant columns map to 0.5."""
    f = np.asarray(values, dtype=float) * signs
    lo = f.min(axis=0)
    hi = f.max(axis=0)
    span = hi - lo
    out = np.full_like(f, 0.5)
    ok = span > 0
    out[:, ok] = (f[:, ok] - lo[ok]) / span[ok]
    return np.clip(out, 0.0, 1.0)


def normalize(aset: ApproximationSet) -> ApproximationSet:
    if len(aset) == 0:
        raise InsufficientDataError("cannot normalise an empty set")
    norm = normalize_values(aset.values(), aset.signs())
    specs = tuple(ObjectiveSpec(s.name, Sense.MAXIMISE) for s in aset.specs)
    sols = [replace(s, objectives=tuple(row)) for s, row in zip(aset.solutions, norm)]
    return ApproximationSet(specs, tuple(sols), aset.instance_id)


# -- ingestion format -------------------------------------------------------

HEADER_PREFIX = "# objectives:"


class ParseError(ValueError):
    def __init__(self, message: str, line: int | None = None):
        self.line = line
        super().__init__(f"line {line}: {message}" if line is not None else message)


def format_specs(specs: Sequence[ObjectiveSpec]) -> str:
    return HEADER_PREFIX + " " + ",".join(f"{s.name}:{s.sense.value}" for s in specs)


def _fmt(v: float) -> str:
    return str(int(v)) if float(v).is_integer() else repr(float(v))


def dumps_set(aset: ApproximationSet, meta: dict[str, str] | None = None) -> str:
    lines = [format_specs(aset.specs)]
    if aset.instance_id:
        lines.append(f"# instance: {aset.instance_id}")
    for key, val in (meta or {}).items():
        lines.append(f"# {key}: {val}")
    for sol in aset.solutions:
        row = ",".join(_fmt(v) for v in sol.objectives)
        if sol.decision is not None:
            row += "|" + "".join(str(b) for b in sol.decision)
        lines.append(row)
    return "\n".join(lines) + "\n"


def loads_set(text: str, instance_id: str = "") -> ApproximationSet:
    specs: list[ObjectiveSpec] | None = None
    rows: list[Solution] = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line:
            continue
        if line.startswith("#"):
            if line.startswith(HEADER_PREFIX):
                specs = []
                for item in line[len(HEADER_PREFIX):].split(","):
                    name, _, sense = item.strip().partition(":")
                    try:
                        specs.append(ObjectiveSpec(name.strip(), Sense(sense.strip().lower() or "max")))
                    except ValueError as exc:
                        raise ParseError(f"bad objective spec {item!r}: {exc}", lineno) from None
            elif line.startswith("# instance:") and not instance_id:
                instance_id = line.split(":", 1)[1].strip()
            continue
        if specs is None:
            raise ParseError("data row before '# objectives:' header", lineno)
        body, bar, bits = line.partition("|")
        cells = [c for c in body.split(",")]
        if len(cells) != len(specs):
            raise ParseError(f"expected {len(specs)} values, got {len(cells)}", lineno)
        try:
            vals = tuple(float(c) for c in cells)
        except ValueError:
            raise ParseError(f"non-numeric value in {body!r}", lineno) from None
        decision = None
        if bar:
            bits = bits.strip().replace(",", "").replace(" ", "")
            if not bits or set(bits) - {"0", "1"}:
                raise ParseError(f"bad decision bit-string {bits!r}", lineno)
            decision = tuple(int(b) for b in bits)
        try:
            rows.append(Solution(vals, decision, origin=f"line {lineno}"))
        except ValueError as exc:
            raise ParseError(str(exc), lineno) from None
    if specs is None:
        raise ParseError("missing '# objectives:' header")
    return ApproximationSet(tuple(specs), tuple(rows), instance_id)


def read_set(path) -> ApproximationSet:
    from pathlib import Path

    path = Path(path)
    aset = loads_set(path.read_text(encoding="utf-8"))
    if not aset.instance_id:
        aset = replace(aset, instance_id=path.stem)
    return aset


def write_set(aset: ApproximationSet, path, meta: dict[str, str] | None = None) -> None:
    from .io import atomic_write_text

    atomic_write_text(path, dumps_set(aset, meta))

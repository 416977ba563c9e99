"""Multiobjective multidimensional 0-1 knapsack instances.

Five generator recipes are available:

* ``A`` independent: weights and profits uniform on [1, 1000].
* ``B`` harmonious: each profit within +-100 of the previous one.
* ``C`` conflicting: each profit roughly ``1000 - previous`` (sum in [900, 1100]).
* ``D`` as ``C`` but with weights driven by profit differences.
* ``X`` a misleading set where most of the items that carry two high profits
  carry two low ones, and weights are sums of three profits.

Integer draws include both endpoints.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .io import atomic_write_text


class InstanceError(ValueError):
    pass


class SetKind(str, enum.Enum):
    A = "A"
    B = "B"
    C = "C"
    D = "D"
    X = "X"
    EXTERNAL = "External"


SET_D_NOTE = "set D: weight j in 2..4 uses |c_j - c_(j-1)|, weight 1 uses |c_1 - c_4|"


@dataclass(frozen=True, eq=False)
class MomkpInstance:
    weights: np.ndarray  # n x m
    profits: np.ndarray  # n x p
    capacities: np.ndarray  # m
    kind: SetKind = SetKind.EXTERNAL
    seed: int = 0
    notes: tuple[str, ...] = field(default=())

    def __post_init__(self):
        w = np.asarray(self.weights, dtype=np.int64)
        c = np.asarray(self.profits, dtype=np.int64)
        cap = np.asarray(self.capacities, dtype=np.int64)
        if w.ndim != 2 or c.ndim != 2 or len(w) != len(c):
            raise InstanceError("weights and profits must be n x m and n x p")
        if cap.shape != (w.shape[1],):
            raise InstanceError("one capacity per weight dimension is required")
        if (cap < 0).any():
            raise InstanceError("capacities must be non-negative")
        for arr in (w, c, cap):
            arr.setflags(write=False)
        object.__setattr__(self, "weights", w)
        object.__setattr__(self, "profits", c)
        object.__setattr__(self, "capacities", cap)
        object.__setattr__(self, "kind", SetKind(self.kind))

    @property
    def n(self) -> int:
        return self.weights.shape[0]

    @property
    def m(self) -> int:
        return self.weights.shape[1]

    @property
    def p(self) -> int:
        return self.profits.shape[1]

    def __eq__(self, other):
        if not isinstance(other, MomkpInstance):
            return NotImplemented
        return (
            self.kind == other.kind
            and self.seed == other.seed
            and np.array_equal(self.weights, other.weights)
            and np.array_equal(self.profits, other.profits)
            and np.array_equal(self.capacities, other.capacities)
        )

    def check(self) -> None:
        """Raise InstanceError if the recipe invariants of ``kind`` do not hold."""
        check_invariants(self)


# -- generation -------------------------------------------------------------


def _draw(rng: np.random.Generator, lo, hi) -> np.ndarray:
    lo = np.asarray(lo, dtype=np.int64)
    hi = np.asarray(hi, dtype=np.int64)
    # an empty interval cannot arise from the recipes; collapse to the lower end
    hi = np.maximum(hi, lo)
    return rng.integers(lo, hi, endpoint=True)


def _chain(rng, first, n, lo_fn, hi_fn, p) -> np.ndarray:
    cols = [first]
    for _ in range(1, p):
        prev = cols[-1]
        cols.append(_draw(rng, lo_fn(prev), hi_fn(prev)))
    return np.stack(cols, axis=1)


def _set_x(rng: np.random.Generator, n: int) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    r = rng.random(n)
    high = lambda: rng.integers(900, 1000, n, endpoint=True)  # noqa: E731
    low = lambda: rng.integers(0, 100, n, endpoint=True)  # noqa: E731
    # every branch is drawn for every item, then the branch picked by r applies
    b1 = np.empty((n, 4), np.int64)
    b1[:, 0] = high()
    b1[:, 1] = _draw(rng, b1[:, 0], 1000)
    b1[:, 2], b1[:, 3] = low(), low()
    b2 = np.empty((n, 4), np.int64)
    b2[:, 2] = high()
    b2[:, 3] = _draw(rng, b2[:, 2], 1000)
    b2[:, 0], b2[:, 1] = low(), low()
    b3 = np.empty((n, 4), np.int64)
    b3[:, 0] = high()
    b3[:, 2] = _draw(rng, b3[:, 0], 1000)
    b3[:, 1], b3[:, 3] = low(), low()
    b4 = np.empty((n, 4), np.int64)
    b4[:, 1], b4[:, 2] = high(), high()
    b4[:, 0], b4[:, 3] = low(), low()
    b5 = rng.integers(0, 1000, (n, 4), endpoint=True)
    branch = np.select([r <= 0.1, r <= 0.2, r <= 0.3, r <= 0.4], [0, 1, 2, 3], default=4)
    c = np.choose(branch[:, None], [b1, b2, b3, b4, b5])
    w = np.stack(
        [
            c[:, 0] + c[:, 1] + c[:, 2],
            c[:, 1] + c[:, 2] + c[:, 3],
            c[:, 0] + c[:, 2] + c[:, 3],
            c[:, 0] + c[:, 1] + c[:, 3],
        ],
        axis=1,
    )
    return w, c, branch


def default_capacity(n: int) -> int:
    """50 per item, i.e. 50000 at n = 1000."""
    return 50 * n


def generate(
    kind,
    n: int = 1000,
    m: int = 4,
    p: int = 4,
    capacity: int | None = None,
    seed: int = 0,
) -> MomkpInstance:
    inst, _ = generate_with_branches(kind, n, m, p, capacity, seed)
    return inst


def generate_with_branches(kind, n=1000, m=4, p=4, capacity=None, seed=0):
    """Like :func:`generate`; also returns the set-X branch of every item (else None)."""
    try:
        kind = kind if isinstance(kind, SetKind) else SetKind(str(kind).upper())
    except ValueError:
        raise InstanceError(f"unknown set kind {kind!r}") from None
    if kind is SetKind.EXTERNAL:
        raise InstanceError("external instances are read from files, not generated")
    if n < 1 or m < 1 or p < 1:
        raise InstanceError("n, m and p must be positive")
    if kind in (SetKind.B, SetKind.C) and p != 4:
        raise InstanceError(f"set {kind.value} is defined for p = 4 only")
    if kind in (SetKind.D, SetKind.X) and (p != 4 or m != 4):
        raise InstanceError(f"set {kind.value} is defined for m = p = 4 only")
    cap = default_capacity(n) if capacity is None else int(capacity)
    rng = np.random.default_rng(seed)
    branch = None
    notes: tuple[str, ...] = ()

    if kind is SetKind.X:
        w, c, branch = _set_x(rng, n)
    else:
        w = rng.integers(1, 1000, (n, m), endpoint=True)
        first = rng.integers(1, 1000, n, endpoint=True)
        if kind is SetKind.A:
            c = np.column_stack([first, rng.integers(1, 1000, (n, p - 1), endpoint=True)])
        elif kind is SetKind.B:
            c = _chain(rng, first, n, lambda v: np.maximum(v - 100, 1), lambda v: np.minimum(v + 100, 1000), p)
        else:
            c = _chain(rng, first, n, lambda v: np.maximum(900 - v, 1), lambda v: np.minimum(1100 - v, 1000), p)
        if kind is SetKind.D:
            diffs = [np.abs(c[:, 0] - c[:, 3])] + [np.abs(c[:, j] - c[:, j - 1]) for j in range(1, 4)]
            w = np.stack(
                [_draw(rng, np.maximum(900 - d, 1), np.minimum(1100 - d, 1000)) for d in diffs], axis=1
            )
            notes = (SET_D_NOTE,)
    inst = MomkpInstance(w, c, np.full(w.shape[1], cap), kind, seed, notes)
    return inst, branch


def check_invariants(inst: MomkpInstance) -> None:
    w, c = inst.weights, inst.profits
    kind = inst.kind
    if kind is SetKind.EXTERNAL:
        if (w < 0).any() or (c < 0).any():
            raise InstanceError("weights and profits must be non-negative")
        return
    if kind is SetKind.X:
        expected = np.stack(
            [c[:, 0] + c[:, 1] + c[:, 2], c[:, 1] + c[:, 2] + c[:, 3],
             c[:, 0] + c[:, 2] + c[:, 3], c[:, 0] + c[:, 1] + c[:, 3]],
            axis=1,
        )
        if w.shape != expected.shape or not np.array_equal(w, expected):
            raise InstanceError("set X weights must be sums of three profits")
        if (c < 0).any() or (c > 1000).any():
            raise InstanceError("set X profits must lie in [0, 1000]")
        return
    if (w < 1).any() or (w > 1000).any():
        raise InstanceError("weights must lie in [1, 1000]")
    if (c < 1).any() or (c > 1000).any():
        raise InstanceError("profits must lie in [1, 1000]")
    if kind is SetKind.B and (np.abs(np.diff(c, axis=1)) > 100).any():
        raise InstanceError("set B consecutive profits differ by more than 100")
    if kind in (SetKind.C, SetKind.D):
        s = c[:, 1:] + c[:, :-1]
        prev = c[:, :-1]
        lo = np.maximum(900 - prev, 1) + prev
        hi = np.minimum(1100 - prev, 1000) + prev
        if ((s < lo) | (s > hi)).any():
            raise InstanceError(f"set {kind.value} consecutive profit sums out of range")
    if kind is SetKind.D:
        diffs = np.stack([np.abs(c[:, 0] - c[:, 3])] + [np.abs(c[:, j] - c[:, j - 1]) for j in range(1, 4)], axis=1)
        if ((w < np.maximum(900 - diffs, 1)) | (w > np.minimum(1100 - diffs, 1000))).any():
            raise InstanceError("set D weights do not follow the profit differences")


# -- evaluation and constraints --------------------------------------------


def _as_selection(inst: MomkpInstance, x) -> np.ndarray:
    x = np.asarray(x)
    if x.shape != (inst.n,):
        raise InstanceError(f"selection length {x.shape} does not match n={inst.n}")
    return x.astype(bool)


def evaluate(inst: MomkpInstance, x) -> tuple[int, ...]:
    x = _as_selection(inst, x)
    return tuple(int(v) for v in inst.profits[x].sum(axis=0))


def loads(inst: MomkpInstance, x) -> np.ndarray:
    return inst.weights[_as_selection(inst, x)].sum(axis=0)


def feasible(inst: MomkpInstance, x) -> bool:
    return bool(np.all(loads(inst, x) <= inst.capacities))


def profit_density(inst: MomkpInstance) -> np.ndarray:
    total_w = inst.weights.sum(axis=1).astype(float)
    total_c = inst.profits.sum(axis=1).astype(float)
    with np.errstate(divide="ignore", invalid="ignore"):
        ratio = np.where(total_w > 0, total_c / np.where(total_w > 0, total_w, 1), np.inf)
    return ratio


def removal_order(inst: MomkpInstance, rng: np.random.Generator) -> np.ndarray:
    """Items by increasing profit density, ties broken by ``rng``."""
    tie = rng.permutation(inst.n)
    return np.lexsort((tie, profit_density(inst)))


def repair_many(inst: MomkpInstance, X: np.ndarray, order: np.ndarray) -> np.ndarray:
    """Drop selected items in ``order`` until every row of ``X`` is feasible.

    Returns a new boolean matrix; feasible rows are untouched.
    """
    X = np.array(X, dtype=bool, copy=True)
    excess = X.astype(np.int64) @ inst.weights - inst.capacities
    bad = np.flatnonzero((excess > 0).any(axis=1))
    if len(bad) == 0:
        return X
    Xs = X[bad][:, order]
    excess = excess[bad]
    w_ordered = inst.weights[order]
    active = np.arange(len(bad))
    # one removal per pass for every still-infeasible row; children of
    # feasible parents rarely need more than a few passes
    while len(active):
        first = Xs[active].argmax(axis=1)
        Xs[active, first] = False
        excess[active] -= w_ordered[first]
        active = active[(excess[active] > 0).any(axis=1)]
    rows = X[bad]
    rows[:, order] = Xs
    X[bad] = rows
    return X


def repair(inst: MomkpInstance, x, rng: np.random.Generator) -> np.ndarray:
    x = _as_selection(inst, x)
    if feasible(inst, x):
        return x.copy()
    return repair_many(inst, x[None, :], removal_order(inst, rng))[0]


# -- file format ------------------------------------------------------------


def dumps_instance(inst: MomkpInstance) -> str:
    lines = [f"MOMKP {inst.n} {inst.m} {inst.p} {inst.kind.value} {inst.seed}"]
    lines.append(" ".join(str(int(v)) for v in inst.capacities))
    for wi, ci in zip(inst.weights, inst.profits):
        lines.append(" ".join(str(int(v)) for v in (*wi, *ci)))
    return "\n".join(lines) + "\n"


def loads_instance(text: str) -> MomkpInstance:
    lines = [ln for ln in text.splitlines() if ln.strip()]
    if not lines:
        raise InstanceError("empty instance file")
    head = lines[0].split()
    if len(head) != 6 or head[0] != "MOMKP":
        raise InstanceError("line 1: expected 'MOMKP n m p kind seed'")
    try:
        n, m, p = (int(v) for v in head[1:4])
        kind = SetKind(head[4])
        seed = int(head[5])
    except ValueError as exc:
        raise InstanceError(f"line 1: {exc}") from None
    if len(lines) != n + 2:
        raise InstanceError(f"expected {n} item lines, found {len(lines) - 2}")
    try:
        cap = np.array([int(v) for v in lines[1].split()], dtype=np.int64)
        rows = np.array([[int(v) for v in ln.split()] for ln in lines[2:]], dtype=np.int64)
    except ValueError as exc:
        raise InstanceError(f"non-integer entry: {exc}") from None
    if cap.shape != (m,):
        raise InstanceError(f"line 2: expected {m} capacities")
    if rows.shape != (n, m + p):
        raise InstanceError(f"item lines must hold {m} weights and {p} profits")
    notes = (SET_D_NOTE,) if kind is SetKind.D else ()
    inst = MomkpInstance(rows[:, :m], rows[:, m:], cap, kind, seed, notes)
    check_invariants(inst)
    return inst


def write_instance(inst: MomkpInstance, path) -> Path:
    return atomic_write_text(path, dumps_instance(inst))


def read_instance(path) -> MomkpInstance:
    return loads_instance(Path(path).read_text(encoding="utf-8"))

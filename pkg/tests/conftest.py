import itertools

import numpy as np
import pytest

from pareto_lens import ApproximationSet, maximise_specs

# the 19 triples of the three-objective reference example
EXAMPLE19 = [
    (45, 68, 85), (6, 63, 99), (34, 64, 95), (28, 100, 48), (98, 47, 69),
    (48, 62, 79), (72, 24, 90), (82, 79, 16), (36, 100, 97), (100, 87, 41),
    (98, 19, 87), (85, 57, 50), (88, 20, 73), (91, 48, 99), (94, 31, 70),
    (56, 49, 59), (75, 93, 1), (38, 84, 85), (45, 78, 47),
]


@pytest.fixture
def example19():
    return ApproximationSet.from_values(EXAMPLE19, maximise_specs(3), instance_id="example19")


def brute_dominates(a, b, signs):
    a = [x * s for x, s in zip(a, signs)]
    b = [x * s for x, s in zip(b, signs)]
    return all(x >= y for x, y in zip(a, b)) and any(x > y for x, y in zip(a, b))


def brute_filter(rows, signs):
    """All-pairs oracle: indices of survivors, first copy of duplicates kept."""
    keep = []
    for i, a in enumerate(rows):
        if any(brute_dominates(b, a, signs) for b in rows):
            continue
        if any(tuple(rows[k]) == tuple(a) for k in keep):
            continue
        keep.append(i)
    return keep


def brute_tau(x, y):
    """Literal pair enumeration; ties count as neither."""
    mc = md = 0
    for a, b in itertools.combinations(range(len(x)), 2):
        s = (x[a] - x[b]) * (y[a] - y[b])
        if s > 0:
            mc += 1
        elif s < 0:
            md += 1
    mu = len(x)
    return (mc - md) / (mu * (mu - 1) / 2)


def random_rows(rng: np.random.Generator, n: int, m: int, levels: int = 20):
    # coarse integer grid so ties and duplicates actually occur
    return rng.integers(0, levels, (n, m)).astype(float)


def rowwise_filter(rows, signs):
    """All-pairs oracle, one row at a time: is any other row at least as good
    everywhere and better somewhere? Duplicates keep their first copy."""
    f = np.asarray(rows, float) * np.asarray(signs, float)
    keep = []
    for i in range(len(f)):
        ge = (f >= f[i]).all(axis=1)
        gt = (f > f[i]).any(axis=1)
        if (ge & gt).any():
            continue
        if (f[:i] == f[i]).all(axis=1).any():
            continue
        keep.append(i)
    return keep


_ACCEPTANCE = []


def record_acceptance(line: str) -> None:
    _ACCEPTANCE.append(line)


def pytest_terminal_summary(terminalreporter):
    if _ACCEPTANCE:
        terminalreporter.section("acceptance criteria")
        for line in _ACCEPTANCE:
            terminalreporter.write_line(line)

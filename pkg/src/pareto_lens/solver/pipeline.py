"""Archive-seeded solution pipeline.

Stages, in order: one single-objective GA per objective; NSGA-II and the
decomposition GA on every pair and every triplet of objectives; then, after
merging everything into one archive, three NSGA-II and three decomposition
runs over all objectives whose initial populations are half drawn from that
archive. The result is the non-dominated union of all stage outputs.
"""

from __future__ import annotations

import hashlib
import itertools
from dataclasses import dataclass, replace
from typing import Callable, Sequence

import numpy as np

from ..core import ApproximationSet, maximise_specs
from ..momkp import MomkpInstance
from .archive import Archive
from .moead import decomposition_run
from .nsga2 import nsga2_run
from .operators import SolverParams
from .soga import soga

SEEDED_REPEATS = 3


@dataclass(frozen=True)
class Stage:
    stage_id: str
    algorithm: str  # soga | nsga2 | moead
    objectives: tuple[int, ...]
    seeded: bool = False


@dataclass
class SolverRun:
    stage: Stage
    seed: int
    archive: Archive


@dataclass
class PipelineResult:
    approximation: ApproximationSet
    archive: Archive
    runs: list[SolverRun]
    master_seed: int


def stage_seed(master: int, stage_id: str) -> int:
    digest = hashlib.sha256(f"{master}:{stage_id}".encode()).digest()
    return int.from_bytes(digest[:8], "little")


def plan_stages(objectives: Sequence[int]) -> list[Stage]:
    objectives = tuple(objectives)
    stages = [Stage(f"soga:{k}", "soga", (k,)) for k in objectives]
    for size in (2, 3):
        if size >= len(objectives):
            # a pair/triplet equal to the full set is covered by the seeded runs
            continue
        for combo in itertools.combinations(objectives, size):
            tag = "-".join(str(k) for k in combo)
            stages.append(Stage(f"nsga2:{tag}", "nsga2", combo))
            stages.append(Stage(f"moead:{tag}", "moead", combo))
    for r in range(SEEDED_REPEATS):
        stages.append(Stage(f"seeded-nsga2:{r}", "nsga2", objectives, seeded=True))
        stages.append(Stage(f"seeded-moead:{r}", "moead", objectives, seeded=True))
    return stages


def run_stage(
    inst: MomkpInstance,
    stage: Stage,
    params: SolverParams,
    master_seed: int,
    archive: Archive | None = None,
) -> SolverRun:
    seed = stage_seed(master_seed, stage.stage_id)
    rng = np.random.default_rng(seed)
    stage_params = replace(params, seed=seed)
    initial = None
    if stage.seeded and archive is not None and len(archive):
        half = params.population // 2
        pick = rng.choice(len(archive), size=half, replace=len(archive) < half)
        initial = archive.X[pick]
    if stage.algorithm == "soga":
        out = soga(inst, stage.objectives[0], stage_params, origin=stage.stage_id, rng=rng)
    elif stage.algorithm == "nsga2":
        out = nsga2_run(inst, stage.objectives, stage_params, initial, origin=stage.stage_id, rng=rng)
    elif stage.algorithm == "moead":
        out = decomposition_run(inst, stage.objectives, stage_params, initial, origin=stage.stage_id, rng=rng)
    else:
        raise ValueError(f"unknown algorithm {stage.algorithm!r}")
    return SolverRun(stage, seed, out)


def run_pipeline(
    inst: MomkpInstance,
    params: SolverParams,
    master_seed: int | None = None,
    instance_id: str = "",
    progress: Callable[[SolverRun], None] | None = None,
) -> PipelineResult:
    if inst.p < 2:
        raise ValueError("the pipeline needs at least two objectives")
    master = params.seed if master_seed is None else master_seed
    objectives = tuple(params.objective_mask) if params.objective_mask else tuple(range(inst.p))
    if len(objectives) < 2:
        raise ValueError("the objective mask must keep at least two objectives")
    dominance = None if len(objectives) == inst.p else objectives
    archive = Archive.empty(inst.n, inst.p, dominance)
    runs: list[SolverRun] = []
    stages = plan_stages(objectives)
    first_pass = [s for s in stages if not s.seeded]
    for stage in first_pass:
        run = run_stage(inst, stage, params, master)
        runs.append(run)
        if progress:
            progress(run)
    archive = archive.merge(*(r.archive for r in runs))
    seeded_runs = []
    for stage in stages[len(first_pass):]:
        run = run_stage(inst, stage, params, master, archive)
        seeded_runs.append(run)
        if progress:
            progress(run)
    runs.extend(seeded_runs)
    final = archive.merge(*(r.archive for r in seeded_runs))
    aset = final.to_set(maximise_specs(inst.p), instance_id)
    return PipelineResult(aset, final, runs, master)


def seeded_pipeline(inst: MomkpInstance, params: SolverParams, instance_id: str = "") -> ApproximationSet:
    return run_pipeline(inst, params, instance_id=instance_id).approximation

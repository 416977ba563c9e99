from .archive import Archive
from .moead import decomposition_run, simplex_lattice, weight_vectors
from .nsga2 import crowding_distance, nondominated_ranks, nsga2_run
from .operators import SolverParams, bit_flip, hux, hux_many
from .pipeline import PipelineResult, SolverRun, Stage, plan_stages, run_pipeline, run_stage, seeded_pipeline, stage_seed
from .soga import soga

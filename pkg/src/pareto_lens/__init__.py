"""Analysis and visualisation of objective relationships in many-objective sets."""

__version__ = "0.1.0"

from .core import (
    ApproximationSet,
    DimensionError,
    InsufficientDataError,
    ObjectiveSpec,
    ParseError,
    Sense,
    Solution,
    dominates,
    maximise_specs,
    nondominated_filter,
    normalize,
    read_set,
    write_set,
)
from .correlation import PairwiseRelation, Relation, kendall_tau, pairwise_matrix
from .ranges import RangeStats, MeaningfulnessVerdict, classify_meaningful, objective_ranges
from .regionmap import (
    FrequencyMap,
    GrayLayout,
    RegionMap,
    build_distribution_map,
    build_frequency_map,
    gray_layout,
    maximal_all_good_threshold,
    minimal_empty_r0_threshold,
    ThresholdVector,
    region_index,
    threshold_sweep,
)
from .scatter import ScatterSeries, pivot_scatter, render_scatter

"""Smocked metric spaces, with the checkered pattern H worked out in full."""

from .closedform import (
    awesome_length,
    awesome_path,
    classify_network_part,
    d_H_closed_form,
    depth,
    euclidean_path_length,
    isometry_to_origin,
    lemma_inequality,
    max_diagonals,
    monotone_check,
    network_path_length,
    norm_F,
    stitch_distance_closed_form,
)
from .geom import DirectedSegment, Point2, point_segment_distance, segment_segment_nearest
from .metric import (
    CheckeredMetric,
    GeodesicResult,
    Path,
    build_stitch_graph,
    geodesic,
    pseudometric,
    required_window,
    stitch_distance,
)
from .pattern import (
    Pattern,
    Stitch,
    StitchIndex,
    checkered_pattern,
    parse_pattern_file,
    separation_factor,
    smocking_depth,
)

__version__ = "0.1.0"

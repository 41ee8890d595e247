"""Empirical checks on every stage of the construction."""

from .collision import CollisionGraph, collision_analysis, collision_graph, red_edges
from .density import (DensityHypothesisError, HeavyFaceCount, check_nu_bound, count_heavy_faces,
                      full_scan_heavy_faces, heavy_threshold, size_limit, zero_sum_quadruples)
from .expansion import ExpansionProfile, SizeRecord, evaluate_sets, expansion_profile, side_view
from .freeaction import free_action_audit
from .orientation import Orientation, OrientationError, orient_bounded_outdegree
from .reports import REPORT_VERSION, make_report, to_json
from .skeleton import skeleton_eigen_check, skeleton_from_faces, skeleton_graph
from .spectral import SpectralConvergenceError, SpectralEstimate, second_eigenvalue, top_eigenvalue

__all__ = [
    "CollisionGraph", "collision_analysis", "collision_graph", "red_edges",
    "DensityHypothesisError", "HeavyFaceCount", "check_nu_bound", "count_heavy_faces",
    "full_scan_heavy_faces", "heavy_threshold", "size_limit", "zero_sum_quadruples",
    "ExpansionProfile", "SizeRecord", "evaluate_sets", "expansion_profile", "side_view",
    "free_action_audit", "Orientation", "OrientationError", "orient_bounded_outdegree",
    "REPORT_VERSION", "make_report", "to_json",
    "skeleton_eigen_check", "skeleton_from_faces", "skeleton_graph",
    "SpectralConvergenceError", "SpectralEstimate", "second_eigenvalue", "top_eigenvalue",
]

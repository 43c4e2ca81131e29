"""freqcube: testing sets and bitrades for frequency hypercubes.

A frequency cube is an n-dimensional array over [q]^n whose every k-face
carries a prescribed symbol histogram; a k-bitrade is a {-1,0,+1} array
summing to zero on every k-face — the difference pattern of two such cubes.
This package constructs point sets on which those families can be told
apart (testing sets), certifies them by exhaustive bitrade search or by
restriction injectivity, reconstructs members from their values on a
testing set, and searches for minimum-size sets under the full symmetry
group.  Hot search kernels run in a compiled extension when available,
with a pure-Python twin selected automatically at import.
"""

__version__ = "0.1.0"

from ._engine import available_engines, engine_name
from .core import (CANONICAL_GROUP_CAP, CubeArray, Face, GridSig, PointSet,
                   ReconstructionError, ResourceCapError, Symmetry,
                   ValidationError, all_symmetries, apply_symmetry,
                   apply_symmetry_set, ball_count, canonical_form,
                   enumerate_faces, group_order, render_cube,
                   render_point_set, retract, sigma, weight)
from .bitrades import (BitradeCensus, SearchOutcome, affine_support_bitrade,
                       anf, bitrade_from_json_dict, bitrade_to_json_dict,
                       classify_small_bitrades, degree, enumerate_bitrades,
                       enumerate_bitrades_brute, essential_variables,
                       find_bitrade_avoiding, from_anf, is_affine_leq2,
                       is_k_bitrade, support_indicator, support_points)
from .lincodes import (AffineFn, BinMatrix, affine_candidates, b_n_3,
                       bounds_min_testing, brute_min_testing_size, ceil_log2,
                       greedy_code_testing_set, hamming_testing_set,
                       is_testing_for_affine, is_testing_for_linear,
                       min_linear_testing_size)
from .cubes import (CardinalityReport, FreqParams, PartialCube, PascalTable,
                    ball_boundaries, baseline_domain, binomial_boundaries,
                    cardinality_report, cayley_cube, count_cubes,
                    enumerate_cubes, face_sum_matrix, indicator_decomposition,
                    is_frequency_cube, lk_basis, lk_dimension, lk_nullity,
                    matrix_rank_exact, pascal_eval, pascal_expansion,
                    pascal_expansion_check, reconstruct_baseline,
                    reconstruct_csp, restrict, sample_cube,
                    testset_boundaries)
from .testsets import (Certificate, ConstructionSpec, MinSearchResult,
                       baseline_set, certify_supertesting,
                       certify_testing_by_enumeration,
                       certify_testing_by_sampling,
                       derive_minimum_three_cube_set, lift_set,
                       lifted_product_set, min_supertesting_search,
                       minimum_three_cube_set, product_set,
                       recursive_supertesting_set, step_up_set,
                       three_cube_set)

__all__ = [name for name in dir() if not name.startswith("_")]

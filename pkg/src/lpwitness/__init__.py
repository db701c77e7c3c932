"""LP decoding of regular LDPC codes over the fundamental polytope, with
dual-witness certificates assembled from min-sum message logs."""

from .bounds import (depth_from_blocklength, error_exponents, gamma_threshold,
                     max_depth_for_girth, min_tree_codeword_weight,
                     num_min_tree_codewords, p_aj_union_bound, pw_union_bound)
from .channel import (Channel, bhattacharyya, biawgn, bsc, param_for_gamma,
                      sample_llrs, threshold_param)
from .errors import (DegreeTooLarge, DegreeTooSmall, GirthTooSmall,
                     InconsistentWeights, InfeasibleGirth, LpwitnessError,
                     NumericalFailure, ParseError, TooLarge)
from .experiment import ExperimentConfig, TrialRecord, run_experiment, write_results
from .lp import (LinearProgram, LpSolution, dual_value, lp_decode,
                 ml_decode_bruteforce, polytope_constraints, solve_lp)
from .minsum import MessageLog, choose_U, run_modified_msa, run_standard_msa
from .tanner import (CodeParams, TannerGraph, construct_regular,
                     ct_membership_count, girth, load_alist, save_alist)
from .witness import (AttenuationSchedule, DualAssignment, FeasibilityReport,
                      WitnessResult, aggregate, assign_ct, check_dual_feasible,
                      even_weight_vectors, event_Aj, events_all,
                      geometric_schedule, theta_of, witness)

__version__ = "0.1.0"

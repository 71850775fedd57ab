"""lplab: a desk-scale laboratory for LP decoding of binary linear codes
over discrete memoryless symmetric LLR-bounded channels."""

from .channel import (DistortionCertificate, LlrVector, MsbChannel,
                      SigmaPartition, bsc, distort, l1_distance, llr,
                      llr_bound, new_channel, parse_channel_spec,
                      quantized_awgn, s_of_c, sample_llr, sigma_partition,
                      solve_c)
from .errors import LplabError
from .excess_lab import (ExcessCurve, ExperimentConfig, MarkovBoundReport,
                         RedundancyReport, SuccessEstimate, application_k,
                         awgn_coupling_check, estimate_success, excess_curve,
                         exhaustive_success_probability, markov_bound_check,
                         redundancy_experiment, stream)
from .linear_code import (ParityCheckMatrix, TannerGraph, codewords,
                          dual_codewords_up_to_weight, from_alist,
                          full_redundant_graph, matrix_from_graph,
                          max_check_degree, redundant_graph, tanner_graph,
                          to_alist)
from .lp_decoder import (FundamentalPolytope, LpOutcome, build_polytope,
                         decode, decode_with_excess, in_fundamental_cone)
from .simplex import simplex_solve
from .witness import (DualWitness, TrimReport, build_tau, find_witness, flow,
                      make_witness, repair_pipeline, superpose, trim,
                      verify_witness)

__version__ = "0.1.0"

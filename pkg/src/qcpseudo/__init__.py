"""Pseudo-codewords of QC-LDPC block codes and their LDPC convolutional codes.

Polynomial parity-check matrices, wrapping and unwrapping, fundamental cones
and polytopes, pseudo-weights and their exact minima, LP and message-passing
decoders, and a Monte Carlo harness.
"""

from .codes import (ConvCode, QcCode, free_distance_bounds, is_codeword, min_distance_bruteforce,
                    truncated_check, unwrap, wrap)
from .cone import (build_cone, build_polytope, code_cone, cone_contains, monomial_cone_check,
                   project_pseudocodeword)
from .dd import enumerate_extreme_rays
from .errors import GuardExceeded
from .estimators import LPDecoder, MinSumDecoder, SlidingWindowDecoder, SumProductDecoder
from .fixtures import get_fixture
from .lpdecode import boundary_experiment, lambda_alpha_beta, lp_decode
from .mpi import TannerGraph, min_sum_decode, sliding_window_decode, sum_product_decode
from .polys import BinPolyMatrix, NonnegPolyVec, reduce_mod
from .pseudoweights import (min_maxfrac_lp, min_pseudoweight, pw_bound_sequences, theorem1_check)
from .sim import ChannelModel, run_ber, theorem3_trial
from .weights import weight_report

__all__ = [
    "BinPolyMatrix", "ChannelModel", "ConvCode", "GuardExceeded", "LPDecoder", "MinSumDecoder",
    "NonnegPolyVec", "QcCode", "SlidingWindowDecoder", "SumProductDecoder", "TannerGraph",
    "boundary_experiment", "build_cone", "build_polytope", "code_cone", "cone_contains",
    "enumerate_extreme_rays", "free_distance_bounds", "get_fixture", "is_codeword",
    "lambda_alpha_beta", "lp_decode", "min_distance_bruteforce", "min_maxfrac_lp",
    "min_pseudoweight", "min_sum_decode", "monomial_cone_check", "project_pseudocodeword",
    "pw_bound_sequences", "reduce_mod", "run_ber", "sliding_window_decode", "sum_product_decode",
    "theorem1_check", "theorem3_trial", "truncated_check", "unwrap", "weight_report", "wrap",
]

__version__ = "0.1.0"

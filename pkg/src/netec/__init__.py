"""Coherent network error correction over finite fields.

Field arithmetic, network and transfer-matrix models, the per-sink network
distance, coding bounds, two code constructions and minimum-weight decoders.
"""

__version__ = "0.1.0"

from .bounds import bounds_report, gilbert_varshamov, refined_hamming, refined_singleton, sphere_packing
from .codespec import CodeSpec
from .decode import MinWeightDecoder, SphereDecoder, error_sweep, mwd1, mwd2
from .distance_preserving import choose_kernel, construct_distance_preserving, feasible_check, forbidden_set, rs_codebook
from .errors import (
    BudgetExceededError,
    FieldTooSmallError,
    InfeasibleError,
    InvariantError,
    NetecError,
    ValidationError,
)
from .flow import disjoint_paths, maxflow, path_set
from .gf import GF, parse_field
from .greedy_codebook import avoid_subspaces, build_codebook, build_kernels, construct_greedy, greedy_gilbert_codebook
from .metric import Codebook, delta_set, distance, distance_report, dmin, phi_set
from .network import Network, edge_total_order, indicator_matrix, load_fixture, parse_network, prune_to_paths
from .transfer import KernelSet, TransferSet, block_update, build_transfer, received

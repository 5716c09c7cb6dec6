from .analysis import (
    approximate_ber,
    cell_likelihoods,
    enumerate_paths,
    marcum_q1,
    path_pair_probability,
    proposition1_check,
    throughput,
)
from .channel import (
    LinkParams,
    OccupancyModel,
    check_pu_sinr,
    derive_energies,
    occupancy_step,
    steady_state,
    transmit_matrix,
)
from .codebook import (
    expand_codeword,
    map_symbol,
    matrix_hamming_distance,
)
from .config import load_config
from .convolutional import ConvCode, build_trellis, encode
from .decoder import viterbi_decode
from .oracle import OracleConfig, exhaustive_ber
from .simulator import (
    ExperimentConfig,
    run_coded_bpsk_ofdm,
    run_hfsk_ber,
    run_multi_pu_ber,
    run_opportunistic_mfsk,
    run_throughput,
)

__all__ = [
    'map_symbol',
    'matrix_hamming_distance',
    'expand_codeword',
    'ConvCode',
    'encode',
    'build_trellis',
    'LinkParams',
    'OccupancyModel',
    'check_pu_sinr',
    'derive_energies',
    'steady_state',
    'occupancy_step',
    'transmit_matrix',
    'viterbi_decode',
    'marcum_q1',
    'cell_likelihoods',
    'enumerate_paths',
    'path_pair_probability',
    'approximate_ber',
    'throughput',
    'proposition1_check',
    'OracleConfig',
    'exhaustive_ber',
    'ExperimentConfig',
    'run_hfsk_ber',
    'run_opportunistic_mfsk',
    'run_coded_bpsk_ofdm',
    'run_throughput',
    'run_multi_pu_ber',
    'load_config',
]

"""Common test data and utilities."""

import math

import numpy as np

from ptcfsk.analysis import CellLikelihoods
from ptcfsk.codebook import default_mapping
from ptcfsk.convolutional import ConvCode, build_trellis, default_code

# Expanded weight spectrum of the (7, 5) code with the H = 3 table.
H3_SPECTRUM = {16: 1, 20: 2, 24: 4, 28: 8}


def h3_trellis():
    return build_trellis(ConvCode(), default_mapping(3))


def h2_trellis():
    return build_trellis(default_code(2), default_mapping(2))


def symmetric_likelihoods(eps: float) -> CellLikelihoods:
    """Every SU cell flips with probability eps; PUs always light up."""
    return CellLikelihoods(
        p_b1_q1_noPU=1 - eps, p_b1_q0_noPU=eps, p_b1_PU=1.0
    )


def h2_hand_ber(eps: float) -> float:
    """Decoded BER of the pass-through H = 2 link with symmetric flips.

    The two code matrices are complements, so the decision only depends
    on how many of the four cells flipped. Ties go to symbol 0.
    """
    e, c = eps, 1 - eps
    sent_zero = 4 * e**3 * c + e**4
    sent_one = 6 * e**2 * c**2 + 4 * e**3 * c + e**4
    return (sent_zero + sent_one) / 2


def markov_sigma(p_on: float, r: float, p: float, steps: int) -> float:
    """Standard deviation of the On fraction of a stationary chain."""
    lam = 1 - r - p
    return math.sqrt(p_on * (1 - p_on) / steps * (1 + lam) / (1 - lam))


def noiseless_received(mapping, symbols) -> np.ndarray:
    return np.asarray(mapping.matrices[np.asarray(symbols)])

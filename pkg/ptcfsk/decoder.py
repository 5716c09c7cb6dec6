"""Hard decision Viterbi decoding over the expanded code trellis.

The branch metric is the Hamming distance between a received matrix and
the code matrix of the branch (or between received and coded bits on a
binary trellis). Survivors are chosen by minimum cumulative
metric; on a tie the branch from the smaller previous state wins, so the
outcome is fully determined by the received sequence.
"""

import logging
from collections.abc import Sequence
from dataclasses import dataclass, field

import numpy as np

from .convolutional import Trellis
from .errors import DomainError

logger = logging.getLogger(__name__)

_UNREACHABLE = np.iinfo(np.int64).max // 4


@dataclass(frozen=True)
class DecodeResult:
    """Decoder output for one packet.

    Attributes:
        bits (np.ndarray): Decoded information bits, length L.
        path_metric (int): Hamming distance of the survivor to the input.
        tie_count (int): Survivor choices decided by the tie rule.
    """

    bits: np.ndarray = field(repr=False)
    path_metric: int
    tie_count: int


@dataclass(frozen=True)
class BatchDecodeResult:
    """Decoder output for a batch of packets, one row per packet."""

    bits: np.ndarray = field(repr=False)
    path_metric: np.ndarray = field(repr=False)
    tie_count: np.ndarray = field(repr=False)

    def __getitem__(self, index: int) -> DecodeResult:
        return DecodeResult(
            bits=self.bits[index],
            path_metric=int(self.path_metric[index]),
            tie_count=int(self.tie_count[index]),
        )


def viterbi_decode_batch(
    trellis: Trellis, received: np.ndarray, L: int
) -> BatchDecodeResult:
    """Decode a batch of terminated packets.

    Args:
        trellis (Trellis): Code trellis with code matrix labels.
        received (np.ndarray): Hard decisions of shape
            (packets, L / m + memory, H, H), or (packets, L / m + memory,
            n) for a binary trellis.
        L (int): Information bits per packet.

    Returns:
        BatchDecodeResult: Decoded bits of shape (packets, L).

    Raises:
        DomainError: If the number of received matrices or their size does
            not match the trellis labels.
    """
    received = np.asarray(received, dtype=np.uint8)
    code = trellis.code
    labels = trellis.labels
    width = labels.shape[2]
    if L < 0 or L % code.m:
        raise DomainError(f'L={L} is not a multiple of m={code.m}.')
    stages = trellis.stage_count(L)
    packets = received.shape[0] if received.ndim else 0
    if (
        received.ndim < 3
        or received.shape[1] != stages
        or int(np.prod(received.shape[2:])) != width
    ):
        raise DomainError(
            f'Expected {stages} received labels of {width} cells per '
            f'packet, got array of shape {received.shape}.'
        )
    prev_state, prev_input = trellis.predecessors
    rows = np.arange(packets)

    metric = np.full((packets, trellis.n_states), _UNREACHABLE, np.int64)
    metric[:, 0] = 0
    ties = np.zeros(packets, dtype=np.int64)
    choices = np.empty((stages, packets, trellis.n_states), dtype=np.int64)
    for u in range(stages):
        cells = received[:, u].reshape(packets, 1, 1, width)
        branch_metric = np.count_nonzero(cells != labels, axis=3)
        candidates = (
            metric[:, prev_state] + branch_metric[:, prev_state, prev_input]
        )
        best = candidates.min(axis=2)
        choices[u] = candidates.argmin(axis=2)
        tied = (candidates == best[:, :, None]).sum(axis=2) > 1
        ties += np.count_nonzero(tied & (best < _UNREACHABLE), axis=1)
        metric = np.minimum(best, _UNREACHABLE)

    inputs = np.empty((packets, stages), dtype=np.int64)
    state = np.zeros(packets, dtype=np.int64)
    for u in range(stages - 1, -1, -1):
        k = choices[u, rows, state]
        inputs[:, u] = prev_input[state, k]
        state = prev_state[state, k]

    shifts = np.arange(code.m - 1, -1, -1)
    blocks = inputs[:, : L // code.m]
    bits = ((blocks[:, :, None] >> shifts) & 1).reshape(packets, L)
    return BatchDecodeResult(
        bits=bits.astype(np.uint8), path_metric=metric[:, 0], tie_count=ties
    )


def viterbi_decode(
    trellis: Trellis, received: Sequence, L: int
) -> DecodeResult:
    """Decode one terminated packet.

    Args:
        trellis (Trellis): Code trellis with code matrix labels.
        received (Sequence): L / m + memory received matrices, as
            :class:`~ptcfsk.channel.ReceivedMatrix` or H x H arrays.
        L (int): Information bits in the packet.

    Returns:
        DecodeResult: Bits of a minimum distance terminated path.

    Example:
        >>> trellis = build_trellis(ConvCode(), default_mapping(3))
        >>> sent = default_mapping(3).matrices[encode(ConvCode(), [1, 0, 0])]
        >>> viterbi_decode(trellis, sent, 1).bits
        array([1], dtype=uint8)
    """
    width = trellis.labels.shape[2]
    flat = [
        np.asarray(getattr(r, 'cells', r)).reshape(-1) for r in received
    ]
    if any(f.size != width for f in flat):
        raise DomainError(f'Received matrices must hold {width} cells.')
    batch = np.array(flat, dtype=np.uint8).reshape(1, len(flat), width)
    return viterbi_decode_batch(trellis, batch, L)[0]

"""Brute force references for small blocks.

Everything here enumerates every received code matrix and every PU
trajectory instead of sampling them, so it only scales to H <= 3 and a
handful of trellis stages. Used by the tests and by ``ptcfsk validate``.
"""

import itertools
import logging
from collections import defaultdict
from dataclasses import dataclass, field
from functools import cached_property

import numpy as np

from .analysis import CellLikelihoods, path_pair_probability
from .channel import OccupancyModel, p_on_per_band
from .codebook import PermutationMapping
from .convolutional import ConvCode, Trellis, build_trellis
from .errors import BudgetExceededError, ConfigurationError

logger = logging.getLogger(__name__)

_UNREACHABLE = 1 << 40


@dataclass
class OracleConfig:
    """A small coded link to evaluate exactly.

    Attributes:
        mapping (PermutationMapping): Symbol to code matrix mapping.
        code (ConvCode): Convolutional code.
        L (int): Information bits per block.
        likelihoods (CellLikelihoods): Cell detection probabilities.
        occupancy (list[OccupancyModel]): PUs, on distinct bands.
        budget (int): Upper bound on enumerated outcomes.
    """

    mapping: PermutationMapping
    code: ConvCode
    L: int
    likelihoods: CellLikelihoods
    occupancy: list[OccupancyModel] = field(default_factory=list)
    budget: int = 1 << 26

    def __post_init__(self):
        if self.L < 1 or self.L % self.code.m:
            raise ConfigurationError(
                f'Oracle block of {self.L} bits does not fit m={self.code.m}.'
            )
        bands = [model.band for model in self.occupancy]
        if len(set(bands)) != len(bands):
            raise ConfigurationError('PUs must occupy distinct bands.')
        if any(band >= self.H for band in bands):
            raise ConfigurationError(f'PU band beyond H={self.H}.')

    @property
    def H(self) -> int:
        return self.mapping.H

    @cached_property
    def trellis(self) -> Trellis:
        return build_trellis(self.code, self.mapping)

    @property
    def p_on_per_band(self) -> np.ndarray:
        return p_on_per_band(self.occupancy, self.H)


def _trajectory_probabilities(
    init: np.ndarray, trans: np.ndarray, trajectories: np.ndarray, start
) -> np.ndarray:
    """P(trajectory) from steady state (start None) or after ``start``."""
    first = trajectories[:, 0]
    prob = init[first] if start is None else trans[start, first]
    for k in range(1, trajectories.shape[1]):
        prob = prob * trans[trajectories[:, k - 1], trajectories[:, k]]
    return prob


def _all_patterns(n: int) -> np.ndarray:
    """All binary vectors of length n, shape (2**n, n)."""
    shifts = np.arange(n - 1, -1, -1)
    return (np.arange(1 << n)[:, None] >> shifts) & 1


class _StageKernel:
    """Outcome law of one trellis stage.

    Received matrices are grouped by their distance vector to the M code
    matrices, which is all a minimum distance decoder looks at. For every
    transmitted symbol and joint PU state at the end of the previous stage
    the kernel lists (group, joint PU state at the end of this stage,
    probability).
    """

    def __init__(self, config: OracleConfig):
        H = config.H
        mapping = config.mapping
        self.chains = [
            (model.band, *model.chain())
            for model in config.occupancy
            if model.kind != 'always_off'
        ]
        received = _all_patterns(H * H).astype(np.uint8)
        steps = _all_patterns(H)
        n_joint = len(steps) ** len(self.chains)
        size = len(received) * n_joint * mapping.M
        if size > config.budget:
            raise BudgetExceededError('stage outcomes', size, config.budget)
        logger.debug(
            f'Oracle stage: {len(received)} received matrices, '
            f'{n_joint} PU patterns'
        )

        # Row major flattening of the H x H cells.
        codes = mapping.matrices.reshape(mapping.M, -1)
        dist = np.count_nonzero(
            received[:, None, :] != codes[None, :, :], axis=2
        )
        self.groups, inverse = np.unique(dist, axis=0, return_inverse=True)
        inverse = np.asarray(inverse).reshape(-1)
        onehot = np.zeros((len(received), len(self.groups)))
        onehot[np.arange(len(received)), inverse] = 1.0
        self.decision = self.groups.argmin(axis=1)

        lk = config.likelihoods
        self._outcomes: dict[tuple[int, ...], np.ndarray] = {}
        patterns = range(len(steps))
        for joint in itertools.product(patterns, repeat=len(self.chains)):
            mask = np.zeros((H, H), dtype=bool)
            for (band, _, _), idx in zip(self.chains, joint, strict=True):
                mask[band] = steps[idx].astype(bool)
            p1 = np.where(
                mask[None],
                lk.p_b1_PU,
                np.where(
                    mapping.matrices.astype(bool),
                    lk.p_b1_q1_noPU,
                    lk.p_b1_q0_noPU,
                ),
            ).reshape(mapping.M, -1)
            prob = np.where(
                received[None, :, :] == 1, p1[:, None, :], 1 - p1[:, None, :]
            ).prod(axis=2)
            self._outcomes[joint] = prob @ onehot
        self._steps = steps
        self._cache: dict = {}

    @property
    def size(self) -> int:
        return len(self.groups) * len(self._outcomes)

    def transitions(self, start, symbol: int):
        """(group, end state, probability) triples with nonzero mass."""
        key = (start, symbol)
        if key in self._cache:
            return self._cache[key]
        mass: dict[tuple[int, tuple[int, ...]], float] = defaultdict(float)
        per_chain = []
        for c, (_, init, trans) in enumerate(self.chains):
            per_chain.append(
                _trajectory_probabilities(
                    init,
                    trans,
                    self._steps,
                    None if start is None else start[c],
                )
            )
        for joint, grouped in self._outcomes.items():
            weight = 1.0
            for c, idx in enumerate(joint):
                weight *= per_chain[c][idx]
            if weight == 0:
                continue
            end = tuple(int(self._steps[idx][-1]) for idx in joint)
            for g in np.flatnonzero(grouped[symbol]):
                mass[int(g), end] += weight * grouped[symbol][g]
        result = [(g, end, p) for (g, end), p in mass.items() if p > 0]
        self._cache[key] = result
        return result


def _add_compare_select(trellis: Trellis, metrics, dv):
    prev_state, prev_input = trellis.predecessors
    out = trellis.output
    new_metrics = []
    choices = []
    for ns in range(trellis.n_states):
        best, choice = _UNREACHABLE, 0
        for j in range(trellis.n_inputs):
            ps = int(prev_state[ns, j])
            if metrics[ps] >= _UNREACHABLE:
                continue
            candidate = metrics[ps] + int(dv[out[ps, prev_input[ns, j]]])
            if candidate < best:
                best, choice = candidate, j
        new_metrics.append(best)
        choices.append(choice)
    floor = min(new_metrics)
    normalized = tuple(
        m - floor if m < _UNREACHABLE else _UNREACHABLE for m in new_metrics
    )
    return normalized, tuple(choices)


def exhaustive_ber(config: OracleConfig) -> float:
    """Exact decoded BER averaged over all 2**L information blocks.

    Stage by stage, the joint law of the true encoder state, the PU states
    and the Viterbi survivors (normalized path metrics and their bit error
    counts) is propagated over every received matrix and PU trajectory. The
    survivor rule is the decoder's, ties going to the smaller previous
    state.

    Raises:
        BudgetExceededError: If the enumeration outgrows ``config.budget``.
    """
    trellis = config.trellis
    code = config.code
    kernel = _StageKernel(config)
    prev_state, prev_input = trellis.predecessors
    info_stages = config.L // code.m
    S = trellis.n_states

    start_metrics = (0,) + (_UNREACHABLE,) * (S - 1)
    dp: dict = {(0, None, start_metrics, (0,) * S): 1.0}
    acs_cache: dict = {}
    work = 0
    for u in range(trellis.stage_count(config.L)):
        inputs = range(trellis.n_inputs) if u < info_stages else range(1)
        work += len(dp) * len(inputs) * kernel.size
        if work > config.budget:
            raise BudgetExceededError('oracle search', work, config.budget)
        p_input = 1.0 / len(inputs)
        new: dict = defaultdict(float)
        for (state, pu, metrics, errors), prob in dp.items():
            for i in inputs:
                symbol = int(trellis.output[state, i])
                true_next = int(trellis.next_state[state, i])
                for g, pu_end, pk in kernel.transitions(pu, symbol):
                    key = (metrics, g)
                    if key not in acs_cache:
                        acs_cache[key] = _add_compare_select(
                            trellis, metrics, kernel.groups[g]
                        )
                    new_metrics, choices = acs_cache[key]
                    new_errors = []
                    for ns, j in enumerate(choices):
                        e = errors[prev_state[ns, j]]
                        if u < info_stages:
                            e += bin(int(prev_input[ns, j]) ^ i).count('1')
                        new_errors.append(e)
                    new[true_next, pu_end, new_metrics, tuple(new_errors)] += (
                        prob * p_input * pk
                    )
        dp = new
        logger.debug(f'Oracle stage {u}: {len(dp)} joint states')
    ber = sum(prob * key[3][0] for key, prob in dp.items()) / config.L
    return min(max(ber, 0.0), 1.0)


def symbolwise_decision_ber(config: OracleConfig) -> float:
    """Exact BER of deciding every code matrix on its own.

    Each received matrix is compared with all M code matrices and decided
    for the nearest, the lowest symbol winning ties. No convolutional code
    is involved; each symbol carries log2(M) bits.
    """
    kernel = _StageKernel(config)
    mapping = config.mapping
    bits = max(mapping.m, 1)
    ber = 0.0
    for t in range(mapping.M):
        for g, _, pk in kernel.transitions(None, t):
            wrong = bin(int(kernel.decision[g]) ^ t).count('1')
            ber += pk * wrong / (mapping.M * bits)
    return min(max(ber, 0.0), 1.0)


def exhaustive_path_probability(
    transmitted, competing, config: OracleConfig
) -> float:
    """Probability of receiving ``competing`` when ``transmitted`` is sent,
    summed over every PU trajectory.

    Bands are independent, so the sum factors into one sum over the
    2**steps trajectories of each occupied band.

    Raises:
        BudgetExceededError: If a band has too many trajectories.
    """
    H = config.H
    t = np.asarray(transmitted, dtype=np.intp).reshape(-1, H, H)
    c = np.asarray(competing, dtype=np.intp).reshape(-1, H, H)
    if t.shape != c.shape:
        raise ConfigurationError('Pattern lengths differ.')
    # Undo the column major serialization: rows are bands over all steps.
    t_rows = t.transpose(2, 0, 1).reshape(H, -1)
    c_rows = c.transpose(2, 0, 1).reshape(H, -1)
    steps = t_rows.shape[1]
    lk = config.likelihoods
    chains = {model.band: model.chain() for model in config.occupancy}

    total = 1.0
    for band in range(H):
        no_pu = lk.no_pu[t_rows[band], c_rows[band]]
        if band not in chains:
            total *= float(np.prod(no_pu))
            continue
        if (1 << steps) > config.budget:
            raise BudgetExceededError(
                'PU trajectories', 1 << steps, config.budget
            )
        trajectories = _all_patterns(steps)
        init, trans = chains[band]
        prior = _trajectory_probabilities(init, trans, trajectories, None)
        emission = np.where(
            trajectories == 1, lk.pu[c_rows[band]][None, :], no_pu[None, :]
        ).prod(axis=1)
        total *= float(prior @ emission)
    return total


def mixture_gap(transmitted, competing, config: OracleConfig) -> float:
    """Exact minus steady state mixture path probability."""
    exact = exhaustive_path_probability(transmitted, competing, config)
    mixed = path_pair_probability(
        transmitted, competing, config.likelihoods, config.p_on_per_band
    )
    return exact - mixed

"""Analytical BER machinery for permutation trellis coded FSK.

Covers the Marcum Q function, the per cell detection likelihoods, error
event enumeration over the expanded trellis, the truncated union bound,
the packet throughput formula and the check that the bound does not depend
on the transmitted codeword.
"""

import heapq
import logging
import math
from collections.abc import Callable, Iterator
from dataclasses import dataclass, field
from typing import Literal

import numpy as np
from scipy import integrate, special, stats

from .channel import (
    THRESHOLD_FACTOR,
    LinkParams,
    OccupancyModel,
    derive_energies,
)
from .codebook import PermutationMapping
from .convolutional import Trellis, encode
from .errors import DomainError

logger = logging.getLogger(__name__)

Metric = Literal['pattern', 'pairwise']

_SERIES_TOL = 1e-15
_SERIES_CHUNK = 64
# Above this Bessel argument the series needs too many terms.
_SERIES_MAX_ARG = 1e4
# exp(-gap**2 / 2) underflows to 0 for larger gaps.
_SATURATION_GAP = 40.0


def _marcum_q1_scalar(v: float, w: float) -> float:
    if v < 0 or w < 0:
        raise DomainError(f'Marcum Q arguments must be >= 0, got {v}, {w}.')
    if w == 0:
        return 1.0
    if abs(v - w) > _SATURATION_GAP:
        return 1.0 if v > w else 0.0
    x = v * w
    if x > _SERIES_MAX_ARG:
        return float(stats.ncx2.sf(w * w, 2, v * v))
    scale = math.exp(-((v - w) ** 2) / 2)
    # Sum (ratio**k) I_k(vw) with ive(k, x) = I_k(x) exp(-x).
    if v < w:
        ratio, k0, sign, base = v / w, 0, 1.0, 0.0
    else:
        ratio, k0, sign, base = w / v, 1, -1.0, 1.0
    total = 0.0
    while True:
        k = np.arange(k0, k0 + _SERIES_CHUNK)
        terms = ratio**k * special.ive(k, x)
        total += float(terms.sum())
        k0 += _SERIES_CHUNK
        if k0 > x and terms[-1] <= _SERIES_TOL * total:
            break
    return min(max(base + sign * scale * total, 0.0), 1.0)


_marcum_q1_vec = np.vectorize(_marcum_q1_scalar, otypes=[float])


def marcum_q1(v, w):
    """First order Marcum Q function Q_1(v, w).

    Evaluated from the modified Bessel series in exponentially scaled form,
    summed until the terms drop below 1e-15 of the total. Very large
    arguments use the noncentral chi-square survival function.

    Args:
        v: Noncentrality, float or array, >= 0.
        w: Threshold, float or array, >= 0.

    Returns:
        Probability in [0, 1], a float for scalar arguments.

    Raises:
        DomainError: For negative arguments.
    """
    out = _marcum_q1_vec(v, w)
    return float(out) if np.ndim(out) == 0 else out


def marcum_q1_quadrature(v: float, w: float) -> float:
    """Q_1(v, w) by adaptive quadrature of its defining integral.

    Slow; used to cross-check :func:`marcum_q1`.
    """
    if v < 0 or w < 0:
        raise DomainError(f'Marcum Q arguments must be >= 0, got {v}, {w}.')

    def density(x: float) -> float:
        return x * math.exp(-((x - v) ** 2) / 2) * special.i0e(v * x)

    upper = max(v, w) + _SATURATION_GAP
    points = [v] if w < v < upper else None
    value, _ = integrate.quad(
        density,
        w,
        upper,
        epsabs=1e-14,
        epsrel=1e-12,
        limit=400,
        points=points,
    )
    return min(max(value, 0.0), 1.0)


@dataclass(frozen=True)
class CellLikelihoods:
    """Probabilities of a cell decoding to 1.

    Attributes:
        p_b1_q1_noPU (float): SU sent on the cell, no PU.
        p_b1_q0_noPU (float): SU silent on the cell, no PU.
        p_b1_PU (float): PU active on the band, whatever the SU sent.
    """

    p_b1_q1_noPU: float
    p_b1_q0_noPU: float
    p_b1_PU: float

    def __post_init__(self):
        for name in ('p_b1_q1_noPU', 'p_b1_q0_noPU', 'p_b1_PU'):
            value = getattr(self, name)
            if not 0 <= value <= 1:
                raise DomainError(f'{name}={value} is not a probability.')

    @property
    def p_b0_q1_noPU(self) -> float:
        return 1 - self.p_b1_q1_noPU

    @property
    def p_b0_q0_noPU(self) -> float:
        return 1 - self.p_b1_q0_noPU

    @property
    def p_b0_PU(self) -> float:
        return 1 - self.p_b1_PU

    @property
    def no_pu(self) -> np.ndarray:
        """P(b | q, no PU) indexed [q, b]."""
        return np.array(
            [
                [self.p_b0_q0_noPU, self.p_b1_q0_noPU],
                [self.p_b0_q1_noPU, self.p_b1_q1_noPU],
            ]
        )

    @property
    def pu(self) -> np.ndarray:
        """P(b | PU) indexed [b]."""
        return np.array([self.p_b0_PU, self.p_b1_PU])

    def cell_probability(self, q, b, p_on) -> np.ndarray:
        """P(b | q) with the PU active with probability p_on."""
        q = np.asarray(q, dtype=np.intp)
        b = np.asarray(b, dtype=np.intp)
        p_on = np.asarray(p_on, dtype=float)
        return p_on * self.pu[b] + (1 - p_on) * self.no_pu[q, b]


def cell_likelihoods(
    Es_r: float, I_PU: float, N0: float, H: int
) -> CellLikelihoods:
    """Detection likelihoods of the envelope threshold receiver.

    Each cell sees a full tone, Rice distributed with noncentrality
    sqrt(2 E / N0) in units of the noise deviation, against the threshold
    0.6 sqrt(2 E_s^r / N0). The likelihoods are the same for every H.

    Args:
        Es_r (float): Received SU energy of one tone.
        I_PU (float): PU interference energy over one time step.
        N0 (float): Noise spectral density.
        H (int): Bands per code matrix, >= 1.

    Raises:
        DomainError: If N0 or Es_r is not positive or I_PU is negative.
    """
    if N0 <= 0:
        raise DomainError(f'N0 must be positive, got {N0}.')
    if Es_r <= 0 or I_PU < 0 or H < 1:
        raise DomainError(f'Invalid energies Es_r={Es_r}, I_PU={I_PU}.')
    snr = Es_r / N0
    threshold = THRESHOLD_FACTOR * math.sqrt(2 * snr)
    return CellLikelihoods(
        p_b1_q1_noPU=marcum_q1(math.sqrt(2 * snr), threshold),
        p_b1_q0_noPU=math.exp(-(THRESHOLD_FACTOR**2) * snr),
        p_b1_PU=marcum_q1(math.sqrt(2 * I_PU / N0), threshold),
    )


def link_likelihoods(params: LinkParams, pu_band: int = 1) -> CellLikelihoods:
    """Likelihoods for a link, with the PU energy taken at ``pu_band``."""
    energies = derive_energies(params, pu_band)
    return cell_likelihoods(
        energies.Es_r, energies.I_PU, params.N0, params.H
    )


@dataclass(frozen=True, eq=False)
class ErrorPath:
    """Error event diverging from the all-zero path and remerging once.

    Attributes:
        inputs (tuple[int, ...]): Input block per branch.
        symbols (tuple[int, ...]): Encoder output symbol per branch.
        weight (int): Expanded Hamming distance to the all-zero path.
        input_weight (int): Information bit errors the event causes.
        matrices (np.ndarray): Code matrices of the event, (len, H, H).
        reference (np.ndarray): All-zero path matrices over the same
            branches.
    """

    inputs: tuple[int, ...]
    symbols: tuple[int, ...]
    weight: int
    input_weight: int
    matrices: np.ndarray = field(repr=False)
    reference: np.ndarray = field(repr=False)

    def __len__(self):
        return len(self.inputs)

    @property
    def bits(self) -> np.ndarray:
        """Column major expansion of the event."""
        return _serialize(self.matrices)

    @property
    def reference_bits(self) -> np.ndarray:
        return _serialize(self.reference)


@dataclass(frozen=True)
class PathSpectrum:
    """Error events grouped by expanded weight.

    Attributes:
        entries (list[tuple[int, list[ErrorPath]]]): (d, paths) pairs
            sorted by d.
        z (int): Weight classes kept above d*_free.
        m (int): Information bits per branch.
    """

    entries: list[tuple[int, list[ErrorPath]]]
    z: int
    m: int = 1

    @property
    def d_free_star(self) -> int:
        if not self.entries:
            raise DomainError('Empty path spectrum.')
        return self.entries[0][0]

    @property
    def coefficients(self) -> dict[int, int]:
        """a_d per weight d."""
        return {d: len(paths) for d, paths in self.entries}

    def paths(self) -> Iterator[ErrorPath]:
        for _, paths in self.entries:
            yield from paths


def enumerate_paths(
    trellis: Trellis, z: int = 3, max_branches: int | None = None
) -> PathSpectrum:
    """Collect all error events in the z + 1 lightest weight classes.

    Paths are explored lightest first from the zero state, so every event
    of a kept weight class is found before the search stops.

    Args:
        trellis (Trellis): Trellis with code matrix labels.
        z (int): Weight classes to keep above d*_free.
        max_branches (int | None): Abandon partial paths longer than this.
            Defaults to 32 times the number of states.

    Returns:
        PathSpectrum: Events sorted by weight, ties by input sequence.

    Example:
        >>> trellis = build_trellis(ConvCode(), default_mapping(3))
        >>> enumerate_paths(trellis).coefficients
        {16: 1, 20: 2, 24: 4, 28: 8}
    """
    if z < 0:
        raise DomainError(f'Truncation depth must be >= 0, got {z}.')
    if max_branches is None:
        max_branches = 32 * trellis.n_states
    mapping = trellis.mapping
    zero_symbol = int(trellis.output[0, 0])
    branch_weight = mapping.distances[trellis.output, zero_symbol]

    heap: list[tuple[int, tuple[int, ...], int]] = [
        (int(branch_weight[0, i]), (i,), int(trellis.next_state[0, i]))
        for i in range(1, trellis.n_inputs)
    ]
    heapq.heapify(heap)
    classes: list[int] = []
    found: dict[int, list[ErrorPath]] = {}
    abandoned = 0
    while heap:
        weight, inputs, state = heapq.heappop(heap)
        if len(classes) == z + 1 and weight > classes[-1]:
            break
        if state == 0:
            if not classes or weight > classes[-1]:
                classes.append(weight)
            found.setdefault(weight, []).append(
                _error_path(trellis, inputs, weight, zero_symbol)
            )
            continue
        if len(inputs) >= max_branches:
            abandoned += 1
            continue
        for i in range(trellis.n_inputs):
            heapq.heappush(
                heap,
                (
                    weight + int(branch_weight[state, i]),
                    inputs + (i,),
                    int(trellis.next_state[state, i]),
                ),
            )
    if abandoned:
        logger.warning(
            f'{abandoned} partial paths exceeded {max_branches} branches; '
            'the code may be catastrophic.'
        )
    spectrum = PathSpectrum(
        entries=[(d, found[d]) for d in classes], z=z, m=trellis.code.m
    )
    logger.debug(f'Path spectrum: {spectrum.coefficients}')
    return spectrum


def _error_path(
    trellis: Trellis, inputs: tuple[int, ...], weight: int, zero_symbol: int
) -> ErrorPath:
    state = 0
    symbols = []
    for i in inputs:
        symbols.append(int(trellis.output[state, i]))
        state = int(trellis.next_state[state, i])
    matrices = trellis.mapping.matrices
    return ErrorPath(
        inputs=inputs,
        symbols=tuple(symbols),
        weight=weight,
        input_weight=sum(bin(i).count('1') for i in inputs),
        matrices=matrices[symbols],
        reference=matrices[[zero_symbol] * len(symbols)],
    )


def _serialize(matrices: np.ndarray) -> np.ndarray:
    return np.asarray(matrices).transpose(0, 2, 1).reshape(-1)


def _cell_p_on(p_on, n_cells: int) -> np.ndarray:
    """Busy probability per serialized cell.

    ``p_on`` is either one value per band, shape (H,), or one value per
    (band, time step) of a code matrix, shape (H, H), repeated every
    branch.
    """
    p_on = np.asarray(p_on, dtype=float)
    if p_on.ndim == 1:
        H = p_on.size
        block = np.broadcast_to(p_on[:, None], (H, H))
    elif p_on.ndim == 2 and p_on.shape[0] == p_on.shape[1]:
        H = p_on.shape[0]
        block = p_on
    else:
        raise DomainError(f'Cannot use busy probabilities of {p_on.shape}.')
    if np.any((p_on < 0) | (p_on > 1)):
        raise DomainError('Busy probabilities must lie in [0, 1].')
    if n_cells % (H * H):
        raise DomainError(f'{n_cells} cells do not form {H}x{H} matrices.')
    return np.tile(block.flatten(order='F'), n_cells // (H * H))


def _pattern_factors(transmitted, competing, likelihoods, p_on):
    transmitted = np.asarray(transmitted, dtype=np.uint8).reshape(-1)
    competing = np.asarray(competing, dtype=np.uint8).reshape(-1)
    if transmitted.shape != competing.shape:
        raise DomainError(
            f'Pattern lengths differ: {transmitted.size} vs {competing.size}.'
        )
    cell_p = _cell_p_on(p_on, transmitted.size)
    return (
        likelihoods.cell_probability(transmitted, competing, cell_p),
        transmitted,
        competing,
    )


def path_pair_probability(
    transmitted, competing, likelihoods: CellLikelihoods, p_on_per_band
) -> float:
    """Probability that the channel turns ``transmitted`` into ``competing``.

    Product over all cells of the probability of observing the competing
    bit given the transmitted bit, with the PU of each band active with its
    steady state probability.

    Args:
        transmitted: Serialized code matrices that were sent.
        competing: Serialized code matrices of the competing path.
        likelihoods (CellLikelihoods): Cell detection probabilities.
        p_on_per_band: Busy probability per band (H,), or per band and
            time step (H, H).

    Returns:
        float: Probability in [0, 1].

    Raises:
        DomainError: On a length mismatch.
    """
    factors, _, _ = _pattern_factors(
        transmitted, competing, likelihoods, p_on_per_band
    )
    return float(np.prod(factors))


def _vote_law(votes) -> np.ndarray:
    """Law of the number of votes cast by independent cells."""
    law = np.ones(1)
    for p in votes:
        law = np.convolve(law, [1 - p, p])
    return law


def _busy_band_vote_law(
    models: list[OccupancyModel],
    steps: np.ndarray,
    busy_votes: np.ndarray,
    idle_votes: np.ndarray,
) -> np.ndarray:
    """Vote law of the differing cells of a band shared by ``models``.

    The joint On/Off state of the PUs is carried forward step by step from
    the steady state at the first step of the event; the band is busy while
    any PU is On.

    Args:
        models (list[OccupancyModel]): PUs of the band.
        steps (np.ndarray): Increasing time step of every differing cell.
        busy_votes (np.ndarray): Vote probability of each cell, band busy.
        idle_votes (np.ndarray): Vote probability of each cell, band idle.
    """
    init, trans = np.ones(1), np.ones((1, 1))
    for model in models:
        steady, moves = model.chain()
        init, trans = np.kron(init, steady), np.kron(trans, moves)
    busy = np.arange(init.size) > 0
    law = init[:, None]
    previous = 0
    votes = zip(steps, busy_votes, idle_votes, strict=True)
    for step, p_busy, p_idle in votes:
        law = np.linalg.matrix_power(trans.T, int(step) - previous) @ law
        previous = int(step)
        p = np.where(busy, p_busy, p_idle)[:, None]
        grown = np.zeros((law.shape[0], law.shape[1] + 1))
        grown[:, :-1] += law * (1 - p)
        grown[:, 1:] += law * p
        law = grown
    return law.sum(axis=0)


def pairwise_error_probability(
    transmitted,
    competing,
    likelihoods: CellLikelihoods,
    p_on_per_band,
    occupancy: list[OccupancyModel] | None = None,
) -> float:
    """Probability that the received matrices sit closer to ``competing``
    than to ``transmitted``, capped at 1/2.

    Only cells where the two patterns differ matter. Each such cell votes
    for the competing path when its decision equals the competing bit. A
    strict majority of votes is an error and a tie counts half, as the
    decoder settles ties independently of the data.

    Without ``occupancy`` every cell mixes its PU state with the busy
    probability of its band, independently of the other cells. With
    ``occupancy`` the bands of the given PUs follow their Markov chains
    along the time steps of the event, so consecutive cells of a band see
    correlated PU states.

    Args:
        transmitted: Serialized code matrices that were sent.
        competing: Serialized code matrices of the competing path.
        likelihoods (CellLikelihoods): Cell detection probabilities.
        p_on_per_band: Busy probability per band (H,), or per band and
            time step (H, H). Ignored on bands covered by ``occupancy``.
        occupancy (list[OccupancyModel] | None): PUs walked step by step.

    Returns:
        float: Probability in [0, 1/2].

    Raises:
        DomainError: On a length mismatch or a PU beyond the last band.
    """
    factors, transmitted, competing = _pattern_factors(
        transmitted, competing, likelihoods, p_on_per_band
    )
    H = np.asarray(p_on_per_band).shape[0]
    differ = np.flatnonzero(transmitted != competing)
    step, band = np.divmod(differ, H)
    t, c = transmitted[differ], competing[differ]

    shared: dict[int, list[OccupancyModel]] = {}
    for model in occupancy or []:
        if model.band >= H:
            raise DomainError(f'PU band f{model.band + 1} beyond H={H}.')
        shared.setdefault(model.band, []).append(model)
    free = ~np.isin(band, list(shared))
    law = _vote_law(factors[differ][free])
    for j, models in shared.items():
        on = band == j
        law = np.convolve(
            law,
            _busy_band_vote_law(
                models,
                step[on],
                likelihoods.pu[c[on]],
                likelihoods.no_pu[t[on], c[on]],
            ),
        )
    half, odd = divmod(differ.size, 2)
    value = law[half + 1 :].sum() + (0.0 if odd else law[half] / 2)
    return float(min(value, 0.5))


def _path_metric(
    metric: Metric,
    likelihoods: CellLikelihoods,
    p_on,
    occupancy: list[OccupancyModel] | None,
) -> Callable[[np.ndarray, np.ndarray], float]:
    if metric == 'pattern':
        return lambda t, c: path_pair_probability(t, c, likelihoods, p_on)
    if metric == 'pairwise':
        return lambda t, c: pairwise_error_probability(
            t, c, likelihoods, p_on, occupancy
        )
    raise DomainError(f'Unknown metric {metric!r}.')


@dataclass(frozen=True)
class BerEstimate:
    """Truncated union bound on the bit error rate.

    Attributes:
        value (float): Estimate clamped to [0, 1/2].
        z_used (int): Weight classes used above d*_free.
        per_d_contributions (list[tuple[int, float]]): (d, contribution).
    """

    value: float
    z_used: int
    per_d_contributions: list[tuple[int, float]]


def _bound(
    spectrum: PathSpectrum,
    z: int,
    pair: Callable[[ErrorPath], tuple[np.ndarray, np.ndarray]],
    probability: Callable[[np.ndarray, np.ndarray], float],
) -> list[tuple[int, float]]:
    contributions = []
    for d, paths in spectrum.entries[: z + 1]:
        total = 0.0
        for path in paths:
            total += path.input_weight * probability(*pair(path))
        contributions.append((d, total / spectrum.m))
    return contributions


def _clamp(contributions: list[tuple[int, float]]) -> float:
    return min(max(sum(c for _, c in contributions), 0.0), 0.5)


def approximate_ber(
    spectrum: PathSpectrum,
    likelihoods: CellLikelihoods,
    p_on_per_band,
    metric: Metric = 'pairwise',
    z: int | None = None,
    occupancy: list[OccupancyModel] | None = None,
) -> BerEstimate:
    """Truncated union bound with the all-zero codeword transmitted.

    Every stored path is evaluated on its own and weighted by the
    information bits it gets wrong, divided by m. The sum is clamped to
    1/2, the error rate of guessing.

    Args:
        spectrum (PathSpectrum): Enumerated error events.
        likelihoods (CellLikelihoods): Cell detection probabilities.
        p_on_per_band: Busy probability per band.
        metric (Metric): 'pairwise' for the pairwise error probability,
            'pattern' for the probability of receiving the competing
            pattern exactly.
        z (int | None): Use fewer weight classes than enumerated.
        occupancy (list[OccupancyModel] | None): PUs whose Markov chains
            the pairwise metric follows along each event.

    Returns:
        BerEstimate: Estimate and its per weight contributions.

    Raises:
        DomainError: For an empty spectrum or an unknown metric.
    """
    if not spectrum.entries:
        raise DomainError('Cannot approximate BER from an empty spectrum.')
    z = spectrum.z if z is None else min(z, spectrum.z)
    contributions = _bound(
        spectrum,
        z,
        lambda path: (path.reference_bits, path.bits),
        _path_metric(metric, likelihoods, p_on_per_band, occupancy),
    )
    return BerEstimate(
        value=_clamp(contributions),
        z_used=min(z, len(contributions) - 1),
        per_d_contributions=contributions,
    )


def throughput(Pe: float, L: int, Rp: float) -> float:
    """Correctly delivered bits per second, (1 - PER) Rp L.

    PER = 1 - (1 - Pe)**L.

    Example:
        >>> int(throughput(1e-3, 256, 100))
        19815
    """
    if not 0 <= Pe <= 1 or L < 1 or Rp <= 0:
        raise DomainError(f'Invalid throughput inputs Pe={Pe}, L={L}, Rp={Rp}')
    return (1 - Pe) ** L * Rp * L


def _swap_rows(zero: np.ndarray, sent: np.ndarray, event: np.ndarray):
    """Row wise cell swap taking ``zero`` onto ``sent``, applied to event."""
    out = event.copy()
    rows = np.arange(zero.shape[0])
    zc = zero.argmax(axis=1)
    tc = sent.argmax(axis=1)
    out[rows, zc] = event[rows, tc]
    out[rows, tc] = event[rows, zc]
    return out


def proposition1_check(
    trellis: Trellis,
    mapping: PermutationMapping,
    likelihoods: CellLikelihoods,
    p_on_per_band,
    trials: int,
    z: int = 3,
    metric: Metric = 'pattern',
    seed: int = 0,
    spectrum: PathSpectrum | None = None,
) -> float:
    """Largest change of the truncated bound over random transmitted
    codewords.

    For a transmitted codeword c the error events are carried over from
    the all-zero codeword by swapping, row by row in every branch, the cell
    holding the 1 of the all-zero matrix with the cell holding the 1 of the
    transmitted matrix. When PU statistics only depend on the band the
    bound is unchanged; a busy probability varying along the time steps of
    a band breaks this.

    Args:
        trellis (Trellis): Trellis with code matrix labels.
        mapping (PermutationMapping): Mapping of the transmitted symbols.
        likelihoods (CellLikelihoods): Cell detection probabilities.
        p_on_per_band: Busy probability per band (H,), or per band and time
            step (H, H).
        trials (int): Random transmitted codewords to compare.
        z (int): Weight classes to keep above d*_free.
        metric (Metric): Path probability, see :func:`approximate_ber`.
        seed (int): Seed of the transmitted codewords.
        spectrum (PathSpectrum | None): Reuse an enumerated spectrum.

    Returns:
        float: Maximum absolute difference to the all-zero bound.
    """
    if trials <= 0:
        return 0.0
    if spectrum is None:
        spectrum = enumerate_paths(trellis, z)
    base = approximate_ber(spectrum, likelihoods, p_on_per_band, metric, z)
    probability = _path_metric(metric, likelihoods, p_on_per_band, None)
    longest = max(len(p) for p in spectrum.paths())
    rng = np.random.default_rng(seed)
    code = trellis.code
    spread = 0.0
    for _ in range(trials):
        bits = rng.integers(0, 2, longest * code.m)
        start = int(rng.integers(0, code.n_states))
        symbols = encode(code, bits, initial_state=start)
        sent = mapping.matrices[symbols]

        def pair(path: ErrorPath, sent=sent):
            n = len(path)
            moved = np.stack(
                [
                    _swap_rows(path.reference[u], sent[u], path.matrices[u])
                    for u in range(n)
                ]
            )
            return _serialize(sent[:n]), _serialize(moved)

        value = _clamp(_bound(spectrum, z, pair, probability))
        spread = max(spread, abs(value - base.value))
    logger.debug(f'Bound spread over {trials} codewords: {spread:.3e}')
    return spread


def wilson_interval(
    k: int, n: int, confidence: float = 0.99
) -> tuple[float, float]:
    """Wilson score interval of a binomial proportion k / n."""
    if n <= 0:
        return 0.0, 1.0
    if not 0 <= k <= n:
        raise DomainError(f'Successes {k} outside [0, {n}].')
    zq = float(stats.norm.ppf(0.5 + confidence / 2))
    phat = k / n
    denom = 1 + zq * zq / n
    center = (phat + zq * zq / (2 * n)) / denom
    half = zq * math.sqrt(phat * (1 - phat) / n + zq * zq / (4 * n * n))
    half /= denom
    return max(center - half, 0.0), min(center + half, 1.0)


def crossover(x, a, b) -> list[float]:
    """Abscissae where curves a and b cross, by linear interpolation."""
    x = np.asarray(x, dtype=float)
    diff = np.asarray(a, dtype=float) - np.asarray(b, dtype=float)
    if not x.shape == diff.shape:
        raise DomainError('Curves and abscissae differ in length.')
    points: list[float] = []
    for i in range(len(x)):
        if diff[i] == 0:
            if not points or points[-1] != x[i]:
                points.append(float(x[i]))
            continue
        if i + 1 < len(x) and diff[i] * diff[i + 1] < 0:
            t = diff[i] / (diff[i] - diff[i + 1])
            points.append(float(x[i] + t * (x[i + 1] - x[i])))
    return points

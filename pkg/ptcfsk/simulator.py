"""Monte Carlo experiment engine.

Three transmission schemes share the same link, PU processes and packet
flow:

- ``hfsk``: permutation trellis coded H-FSK, decoded by hard decision
  Viterbi.
- ``opportunistic_mfsk``: uncoded M-FSK over all bands while the licensed
  band is sensed idle at the start of the slot, otherwise BFSK on two
  unlicensed bands.
- ``coded_bpsk_ofdm``: (7, 5) coded BPSK spread over all bands without
  sensing.

Randomness is drawn per chunk of packets from a Philox stream keyed by the
master seed, the grid point and the chunk, so results do not depend on how
chunks are spread over worker processes.
"""

import dataclasses
import logging
import math
from collections.abc import Callable
from dataclasses import dataclass, field
from multiprocessing import Pool
from typing import Literal, NamedTuple

import numpy as np

from .analysis import (
    approximate_ber,
    enumerate_paths,
    link_likelihoods,
    throughput,
    wilson_interval,
)
from .channel import (
    DerivedEnergies,
    LinkParams,
    OccupancyModel,
    demodulate,
    derive_energies,
    enforce_sinr_guard,
    markov_for_p_on,
    p_on_per_band,
    pu_cell_mask,
)
from .codebook import PermutationMapping, default_mapping
from .convolutional import (
    ConvCode,
    build_trellis,
    default_code,
    encode_batch,
)
from .decoder import viterbi_decode_batch
from .errors import ConfigurationError

logger = logging.getLogger(__name__)

Scheme = Literal['hfsk', 'opportunistic_mfsk', 'coded_bpsk_ofdm']
Axis = Literal['snr', 'p_on']
EnergyNormalization = Literal['info-bit', 'coded-symbol']

SCHEMES: tuple[str, ...] = ('hfsk', 'opportunistic_mfsk', 'coded_bpsk_ofdm')


@dataclass
class ExperimentConfig:
    """One Monte Carlo sweep.

    Attributes:
        scheme (Scheme): Transmission scheme.
        link (LinkParams): Radio layer parameters.
        occupancy (list[OccupancyModel]): PUs, one per band. On a P_On
            sweep every PU is replaced by a Markov model with the swept
            steady state.
        L (int): Packet size in information bits.
        packets (int): Packets per grid point.
        axis (Axis): What the grid sweeps, E_s^r / N0 in dB or P_On.
        grid (list[float]): Sweep values.
        snr_db (float | None): Fixed SNR on a P_On sweep. None keeps the
            SNR the link parameters give.
        exit_sum (float): r + p of swept Markov models.
        Rp (float): Packets per second, one packet per slot.
        seed (int): Master seed.
        workers (int): Worker processes.
        chunk_packets (int): Packets per random stream.
        mapping (PermutationMapping | None): Overrides the default mapping.
        code (ConvCode | None): Overrides the default code.
        energy_normalization (EnergyNormalization): How the baselines are
            given the same energy as H-FSK.
        confidence (float): Confidence level of reported intervals.
        override_sinr_guard (bool): Simulate links violating the PU SINR.
        z (int): Truncation depth of the analytical curves.
        h_values (list[int]): Band counts of a multi-PU sweep.
        pu_counts (list[int]): PU counts of a multi-PU sweep.
        pu_kinds (list[str]): Occupancy kinds of a multi-PU sweep.
        dynamic_p_on (float): P_On of the Markov PUs of a multi-PU sweep.
    """

    scheme: Scheme = 'hfsk'
    link: LinkParams = field(default_factory=LinkParams)
    occupancy: list[OccupancyModel] = field(
        default_factory=lambda: [OccupancyModel.always_on(1)]
    )
    L: int = 256
    packets: int = 1000
    axis: Axis = 'snr'
    grid: list[float] = field(default_factory=lambda: [7.0])
    snr_db: float | None = None
    exit_sum: float = 0.2
    Rp: float = 100.0
    seed: int = 0
    workers: int = 1
    chunk_packets: int = 200
    mapping: PermutationMapping | None = None
    code: ConvCode | None = None
    energy_normalization: EnergyNormalization = 'info-bit'
    confidence: float = 0.99
    override_sinr_guard: bool = False
    z: int = 3
    h_values: list[int] = field(default_factory=list)
    pu_counts: list[int] = field(default_factory=lambda: [1, 2, 3])
    pu_kinds: list[str] = field(
        default_factory=lambda: ['always_on', 'markov']
    )
    dynamic_p_on: float = 0.35

    def __post_init__(self):
        if self.scheme not in SCHEMES:
            raise ConfigurationError(f'Unknown scheme {self.scheme!r}.')
        if self.L < 1 or self.packets < 1 or self.chunk_packets < 1:
            raise ConfigurationError('L and packet counts must be positive.')
        if not self.grid:
            raise ConfigurationError('The sweep grid is empty.')
        if self.workers < 1:
            raise ConfigurationError('At least one worker is needed.')

    @property
    def H(self) -> int:
        return self.link.H

    @property
    def resolved_code(self) -> ConvCode:
        return self.code if self.code is not None else default_code(self.H)

    @property
    def resolved_mapping(self) -> PermutationMapping:
        if self.mapping is not None:
            return self.mapping
        return default_mapping(self.H, 1 << self.resolved_code.n)

    @property
    def pu_bands(self) -> list[int]:
        return [model.band for model in self.occupancy]

    def link_at(self, x: float) -> LinkParams:
        if self.axis == 'snr':
            return self.link.with_snr_db(x)
        if self.snr_db is not None:
            return self.link.with_snr_db(self.snr_db)
        return self.link

    def occupancy_at(self, x: float) -> list[OccupancyModel]:
        if self.axis == 'p_on':
            return [
                markov_for_p_on(model.band, x, self.exit_sum)
                for model in self.occupancy
            ]
        return [dataclasses.replace(model) for model in self.occupancy]


@dataclass(frozen=True)
class CurvePoint:
    """Aggregated result at one grid point.

    Attributes:
        scheme (str): Transmission scheme.
        H (int): Number of bands.
        x (float): Grid value, SNR in dB or P_On.
        ber (float): Bit error rate.
        ber_ci (tuple[float, float]): Wilson interval of the BER.
        throughput (float): Correct bits per second.
        throughput_ci (tuple[float, float]): Interval of the throughput.
        packets (int): Packets simulated.
        bit_errors (int): Information bit errors counted.
        packet_errors (int): Packets with at least one bit error.
        ties (int): Decoder survivor ties.
        pu_count (int): Number of PUs.
        occupancy (str): PU occupancy kind.
        analytical_ber (float | None): Truncated union bound, if computed.
        analytical_throughput (float | None): Throughput from the bound.
    """

    scheme: str
    H: int
    x: float
    ber: float
    ber_ci: tuple[float, float]
    throughput: float
    throughput_ci: tuple[float, float]
    packets: int
    bit_errors: int
    packet_errors: int
    ties: int = 0
    pu_count: int = 0
    occupancy: str = ''
    analytical_ber: float | None = None
    analytical_throughput: float | None = None


class _Counts(NamedTuple):
    bit_errors: int
    bits: int
    packet_errors: int
    packets: int
    ties: int
    # Packet slots spent, a BFSK fallback packet takes log2(H) of them.
    slots: int


def chunk_rng(seed: int, point: int, chunk: int) -> np.random.Generator:
    """Counter based stream of one chunk of one grid point."""
    sequence = np.random.SeedSequence(seed, spawn_key=(point, chunk))
    return np.random.Generator(np.random.Philox(sequence))


def hfsk_info_bit_energy(config: ExperimentConfig, Es_r: float) -> float:
    """Received H-FSK energy per information bit.

    Every code matrix carries H tones of energy E_s^r.
    """
    code = config.resolved_code
    branches = config.L // code.m + code.memory
    return config.H * Es_r * branches / config.L


def baseline_symbol_energies(
    config: ExperimentConfig, Es_r: float
) -> dict[str, float]:
    """Received energy per transmitted baseline symbol.

    With 'info-bit' normalization every scheme spends the H-FSK energy per
    information bit. With 'coded-symbol' each M-FSK tone, BFSK tone or
    BPSK coded bit gets E_s^r.

    Returns:
        dict[str, float]: Energies keyed 'mfsk', 'bfsk' and 'bpsk'.
    """
    if config.energy_normalization == 'coded-symbol':
        return {'mfsk': Es_r, 'bfsk': Es_r, 'bpsk': Es_r}
    Eb = hfsk_info_bit_energy(config, Es_r)
    bpsk = ConvCode()
    coded_bits = bpsk.n * (config.L // bpsk.m + bpsk.memory)
    return {
        'mfsk': Eb * math.log2(config.H),
        'bfsk': Eb,
        'bpsk': Eb * config.L / coded_bits,
    }


def energy_per_info_bit(
    config: ExperimentConfig, scheme: str, Es_r: float
) -> float:
    """Total received energy of a packet divided by its information bits.

    For the opportunistic scheme both transmission modes are returned as
    the larger of the two; under 'info-bit' normalization they coincide.
    """
    if scheme == 'hfsk':
        return hfsk_info_bit_energy(config, Es_r)
    energies = baseline_symbol_energies(config, Es_r)
    if scheme == 'opportunistic_mfsk':
        k = int(math.log2(config.H))
        return max(
            energies['mfsk'] * math.ceil(config.L / k) / config.L,
            energies['bfsk'],
        )
    bpsk = ConvCode()
    coded_bits = bpsk.n * (config.L // bpsk.m + bpsk.memory)
    return energies['bpsk'] * coded_bits / config.L


def _hfsk_chunk(
    config: ExperimentConfig,
    link: LinkParams,
    energies: DerivedEnergies,
    models: list[OccupancyModel],
    rng: np.random.Generator,
    n: int,
) -> _Counts:
    code = config.resolved_code
    mapping = config.resolved_mapping
    trellis = build_trellis(code, mapping)
    H = mapping.H
    bits = rng.integers(0, 2, (n, config.L), dtype=np.uint8)
    symbols = encode_batch(code, bits)
    sent = mapping.matrices[symbols]
    pu = pu_cell_mask(models, rng, n, symbols.shape[1], H)
    received = demodulate(sent, pu, energies, link.N0, H, rng)
    result = viterbi_decode_batch(trellis, received, config.L)
    errors = np.count_nonzero(result.bits != bits, axis=1)
    return _Counts(
        bit_errors=int(errors.sum()),
        bits=n * config.L,
        packet_errors=int(np.count_nonzero(errors)),
        packets=n,
        ties=int(result.tie_count.sum()),
        slots=n,
    )


def _band_states(
    models: list[OccupancyModel],
    rng: np.random.Generator,
    n: int,
    symbols: int,
    H: int,
) -> np.ndarray:
    """PU state per band at the first step of each baseline symbol.

    Baseline symbols last as long as a code matrix, H occupancy steps.

    Returns:
        np.ndarray: bool array of shape (n, symbols, H).
    """
    states = np.zeros((n, symbols, H), dtype=bool)
    for model in models:
        traj = model.trajectory(rng, n, symbols * H)
        states[:, :, model.band] = traj[:, ::H]
    return states


def _envelopes(
    amplitude: np.ndarray, N0: float, rng: np.random.Generator
) -> np.ndarray:
    """Envelope of a tone of given amplitude in complex Gaussian noise."""
    sigma = math.sqrt(N0 / 2)
    x_i = amplitude + sigma * rng.standard_normal(amplitude.shape)
    x_q = sigma * rng.standard_normal(amplitude.shape)
    return np.hypot(x_i, x_q)


def _opportunistic_chunk(
    config: ExperimentConfig,
    link: LinkParams,
    energies: DerivedEnergies,
    models: list[OccupancyModel],
    rng: np.random.Generator,
    n: int,
) -> _Counts:
    H = link.H
    k = int(math.log2(H))
    if 1 << k != H:
        raise ConfigurationError(f'M-FSK needs a power of two bands, H={H}.')
    free = [b for b in range(H) if b not in {m.band for m in models}][:2]
    if len(free) < 2:
        raise ConfigurationError('BFSK fallback needs two unlicensed bands.')
    symbol_energy = baseline_symbol_energies(config, energies.Es_r)
    pu_amp = math.sqrt(energies.I_PU)

    bits = rng.integers(0, 2, (n, config.L), dtype=np.uint8)
    states = _band_states(models, rng, n, config.L, H)
    busy = states[:, 0, :].any(axis=1)
    errors = np.zeros(n, dtype=np.int64)

    idle = np.flatnonzero(~busy)
    if idle.size:
        n_sym = math.ceil(config.L / k)
        padded = np.zeros((idle.size, n_sym * k), dtype=np.int64)
        padded[:, : config.L] = bits[idle]
        weights = 1 << np.arange(k - 1, -1, -1)
        tones = padded.reshape(idle.size, n_sym, k) @ weights
        pu = states[idle, :n_sym, :]
        amplitude = np.where(
            pu,
            pu_amp,
            np.where(
                np.arange(H) == tones[:, :, None],
                math.sqrt(symbol_energy['mfsk']),
                0.0,
            ),
        )
        decided = _envelopes(amplitude, link.N0, rng).argmax(axis=2)
        shifts = np.arange(k - 1, -1, -1)
        wrong = ((decided ^ tones)[:, :, None] >> shifts) & 1
        errors[idle] = wrong.reshape(idle.size, -1)[:, : config.L].sum(axis=1)

    fallback = np.flatnonzero(busy)
    if fallback.size:
        sent = bits[fallback].astype(bool)
        amplitude = np.zeros((fallback.size, config.L, 2))
        amplitude[..., 1] = np.where(sent, math.sqrt(symbol_energy['bfsk']), 0)
        amplitude[..., 0] = np.where(sent, 0, math.sqrt(symbol_energy['bfsk']))
        decided = _envelopes(amplitude, link.N0, rng).argmax(axis=2)
        errors[fallback] = np.count_nonzero(decided != sent, axis=1)

    return _Counts(
        bit_errors=int(errors.sum()),
        bits=n * config.L,
        packet_errors=int(np.count_nonzero(errors)),
        packets=n,
        ties=0,
        slots=idle.size + k * fallback.size,
    )


def _bpsk_ofdm_chunk(
    config: ExperimentConfig,
    link: LinkParams,
    energies: DerivedEnergies,
    models: list[OccupancyModel],
    rng: np.random.Generator,
    n: int,
) -> _Counts:
    code = ConvCode()
    trellis = build_trellis(code)
    H = link.H
    bits = rng.integers(0, 2, (n, config.L), dtype=np.uint8)
    symbols = encode_batch(code, bits)
    shifts = np.arange(code.n - 1, -1, -1)
    coded = ((symbols[:, :, None] >> shifts) & 1).reshape(n, -1)
    n_coded = coded.shape[1]
    ofdm_symbols = math.ceil(n_coded / H)
    states = _band_states(models, rng, n, ofdm_symbols, H)
    # Coded bit i rides subcarrier i mod H of OFDM symbol i // H.
    pu = states.reshape(n, -1)[:, :n_coded]

    amp = math.sqrt(baseline_symbol_energies(config, energies.Es_r)['bpsk'])
    phase = rng.uniform(0.0, 2 * math.pi, (n, n_coded))
    noise = math.sqrt(link.N0 / 2) * rng.standard_normal((n, n_coded))
    statistic = (
        (1 - 2 * coded.astype(float)) * amp
        + pu * math.sqrt(energies.I_PU) * np.cos(phase)
        + noise
    )
    hard = (statistic < 0).astype(np.uint8).reshape(n, -1, code.n)
    result = viterbi_decode_batch(trellis, hard, config.L)
    errors = np.count_nonzero(result.bits != bits, axis=1)
    return _Counts(
        bit_errors=int(errors.sum()),
        bits=n * config.L,
        packet_errors=int(np.count_nonzero(errors)),
        packets=n,
        ties=int(result.tie_count.sum()),
        slots=n,
    )


_CHAINS: dict[str, Callable[..., _Counts]] = {
    'hfsk': _hfsk_chunk,
    'opportunistic_mfsk': _opportunistic_chunk,
    'coded_bpsk_ofdm': _bpsk_ofdm_chunk,
}


def _simulate_chunk(
    config: ExperimentConfig, point: int, chunk: int, n: int
) -> _Counts:
    x = config.grid[point]
    link = config.link_at(x)
    models = config.occupancy_at(x)
    pu_band = models[0].band if models else 1
    energies = derive_energies(link, pu_band)
    rng = chunk_rng(config.seed, point, chunk)
    return _CHAINS[config.scheme](config, link, energies, models, rng, n)


def _tasks(config: ExperimentConfig) -> list[tuple]:
    tasks = []
    for point in range(len(config.grid)):
        remaining = config.packets
        chunk = 0
        while remaining > 0:
            n = min(config.chunk_packets, remaining)
            tasks.append((config, point, chunk, n))
            remaining -= n
            chunk += 1
    return tasks


def _point(
    config: ExperimentConfig, x: float, counts: _Counts
) -> CurvePoint:
    good = counts.packets - counts.packet_errors
    # Rp packet slots per second, a packet holds L bits.
    rate = config.Rp * config.L * counts.packets / counts.slots
    lo, hi = wilson_interval(good, counts.packets, config.confidence)
    kinds = sorted({model.kind for model in config.occupancy_at(x)})
    return CurvePoint(
        scheme=config.scheme,
        H=config.H,
        x=float(x),
        ber=counts.bit_errors / counts.bits,
        ber_ci=wilson_interval(
            counts.bit_errors, counts.bits, config.confidence
        ),
        throughput=good / counts.packets * rate,
        throughput_ci=(lo * rate, hi * rate),
        packets=counts.packets,
        bit_errors=counts.bit_errors,
        packet_errors=counts.packet_errors,
        ties=counts.ties,
        pu_count=len(config.occupancy),
        occupancy='+'.join(kinds) if kinds else 'none',
    )


def simulate(config: ExperimentConfig) -> list[CurvePoint]:
    """Run the configured scheme over the grid.

    Multiprocessing Conditions:
        Chunks are spread over ``config.workers`` processes unless only one
        worker is configured or the logger is at DEBUG level, whose long
        messages are not multiprocess safe.

    Raises:
        SinrGuardError: If a grid point breaks the PU SINR constraint and
            the guard is not overridden.
    """
    for x in config.grid:
        enforce_sinr_guard(
            config.link_at(x), config.pu_bands, config.override_sinr_guard
        )
    tasks = _tasks(config)
    logger.info(
        f'[{config.scheme} H={config.H}] {len(config.grid)} points, '
        f'{len(tasks)} chunks, {config.workers} workers'
    )
    if config.workers == 1 or logger.getEffectiveLevel() == logging.DEBUG:
        results = [_simulate_chunk(*task) for task in tasks]
    else:
        with Pool(config.workers) as p:
            results = p.starmap(_simulate_chunk, tasks)

    totals = [_Counts(*[0] * len(_Counts._fields)) for _ in config.grid]
    for (_, point, _, _), counts in zip(tasks, results, strict=True):
        totals[point] = _Counts(
            *(a + b for a, b in zip(totals[point], counts, strict=True))
        )
    points = [
        _point(config, x, counts)
        for x, counts in zip(config.grid, totals, strict=True)
    ]
    for pt in points:
        logger.debug(
            f'[{config.scheme} H={config.H} x={pt.x:g}] BER {pt.ber:.3e}, '
            f'{pt.packet_errors}/{pt.packets} packets lost'
        )
    return points


def _require(config: ExperimentConfig, scheme: str) -> None:
    if config.scheme != scheme:
        raise ConfigurationError(
            f'Expected scheme {scheme!r}, configuration has '
            f'{config.scheme!r}.'
        )


def run_hfsk_ber(config: ExperimentConfig) -> list[CurvePoint]:
    """Simulated BER of permutation trellis coded H-FSK."""
    _require(config, 'hfsk')
    return simulate(config)


def run_opportunistic_mfsk(config: ExperimentConfig) -> list[CurvePoint]:
    """Simulated BER and throughput of the sensing M-FSK baseline.

    Sensing at the slot start is perfect and free; a PU switching on later
    in the slot hits the in-flight symbols. A packet sent by BFSK occupies
    log2(H) slots, so its throughput counts the extra airtime.
    """
    _require(config, 'opportunistic_mfsk')
    return simulate(config)


def run_coded_bpsk_ofdm(config: ExperimentConfig) -> list[CurvePoint]:
    """Simulated BER and throughput of the coded BPSK-OFDM baseline."""
    _require(config, 'coded_bpsk_ofdm')
    return simulate(config)


def run_scheme(config: ExperimentConfig) -> list[CurvePoint]:
    """Dispatch to the runner of ``config.scheme``."""
    runners = {
        'hfsk': run_hfsk_ber,
        'opportunistic_mfsk': run_opportunistic_mfsk,
        'coded_bpsk_ofdm': run_coded_bpsk_ofdm,
    }
    return runners[config.scheme](config)


def analytical_point(
    config: ExperimentConfig, x: float, spectrum=None
) -> tuple[float, float]:
    """Truncated union bound BER and its throughput at a grid value."""
    link = config.link_at(x)
    models = config.occupancy_at(x)
    pu_band = models[0].band if models else 1
    if spectrum is None:
        trellis = build_trellis(config.resolved_code, config.resolved_mapping)
        spectrum = enumerate_paths(trellis, config.z)
    estimate = approximate_ber(
        spectrum,
        link_likelihoods(link, pu_band),
        p_on_per_band(models, config.H),
        occupancy=models,
    )
    return estimate.value, throughput(estimate.value, config.L, config.Rp)


def run_throughput(
    config: ExperimentConfig, window_slots: int | None = None
) -> list[CurvePoint]:
    """Throughput over a window of slots, one packet per slot.

    Throughput is correct packets times L over the duration of the slots
    used, with Rp slots per second. H-FSK points also carry the throughput
    predicted from the union bound.

    Args:
        config (ExperimentConfig): Sweep, usually over P_On.
        window_slots (int | None): Slots per grid point, defaults to
            ``config.packets``.
    """
    if window_slots is not None:
        config = dataclasses.replace(config, packets=window_slots)
    points = run_scheme(config)
    if config.scheme != 'hfsk':
        return points
    trellis = build_trellis(config.resolved_code, config.resolved_mapping)
    spectrum = enumerate_paths(trellis, config.z)
    out = []
    for pt in points:
        ber, thr = analytical_point(config, pt.x, spectrum)
        out.append(
            dataclasses.replace(
                pt, analytical_ber=ber, analytical_throughput=thr
            )
        )
    return out


def run_multi_pu_ber(config: ExperimentConfig) -> list[CurvePoint]:
    """H-FSK BER for growing numbers of PUs on f2, f3, f4.

    Sweeps every combination of ``h_values``, ``pu_kinds`` and
    ``pu_counts``; combinations needing more PU bands than H - 1 are
    skipped. Markov PUs use ``dynamic_p_on``.
    """
    _require(config, 'hfsk')
    points: list[CurvePoint] = []
    for H in config.h_values or [config.H]:
        for kind in config.pu_kinds:
            for count in config.pu_counts:
                if count > H - 1:
                    logger.info(f'[multi-pu] {count} PUs need H > {H}.')
                    continue
                models = [
                    OccupancyModel.always_on(band)
                    if kind == 'always_on'
                    else markov_for_p_on(
                        band, config.dynamic_p_on, config.exit_sum
                    )
                    for band in range(1, count + 1)
                ]
                sub = dataclasses.replace(
                    config,
                    link=dataclasses.replace(config.link, H=H),
                    occupancy=models,
                    axis='snr',
                    mapping=config.mapping if H == config.H else None,
                    code=config.code if H == config.H else None,
                )
                points.extend(simulate(sub))
    return points


def check_multi_pu_ordering(points: list[CurvePoint]) -> list[str]:
    """Ordering claims violated beyond the confidence intervals.

    Checked at every SNR: BER grows with the number of PUs, falls with H
    under always-on PUs, and dynamic PUs do no worse than always-on ones.

    Returns:
        list[str]: One message per violation, empty when all hold.
    """
    index = {(p.H, p.occupancy, p.pu_count, p.x): p for p in points}
    violations = []

    def worse(better: CurvePoint, other: CurvePoint) -> bool:
        return better.ber_ci[0] > other.ber_ci[1]

    for (H, kind, count, x), pt in sorted(index.items()):
        more = index.get((H, kind, count + 1, x))
        if more is not None and worse(pt, more):
            violations.append(
                f'H={H} {kind} x={x:g}: {count} PUs worse than {count + 1}'
            )
        if kind == 'always_on':
            larger = [
                q for (h, k, c, xx), q in index.items()
                if k == kind and c == count and xx == x and h > H
            ]
            for q in larger:
                if worse(q, pt):
                    violations.append(
                        f'{count} PUs x={x:g}: H={q.H} worse than H={H}'
                    )
            dynamic = index.get((H, 'markov', count, x))
            if dynamic is not None and worse(dynamic, pt):
                violations.append(
                    f'H={H} {count} PUs x={x:g}: dynamic PU worse than '
                    'always-on'
                )
    return violations

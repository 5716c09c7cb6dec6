"""Self checks run by ``ptcfsk validate``.

Every check returns a :class:`CheckResult`; a check never raises for a
wrong number, it reports the failure with a short explanation. The
``quick`` level runs reduced versions of the exactness, special function,
oracle and symmetry checks. ``full`` adds the desk scale acceptance runs:
approximation quality, throughput crossovers, multi-PU ordering and the
timing comparison with the oracle.
"""

import dataclasses
import logging
import math
import time
from collections.abc import Callable
from typing import Literal, NamedTuple

import numpy as np

from .analysis import (
    approximate_ber,
    crossover,
    enumerate_paths,
    link_likelihoods,
    marcum_q1,
    marcum_q1_quadrature,
    proposition1_check,
    wilson_interval,
)
from .channel import OccupancyModel, markov_for_p_on, p_on_per_band
from .codebook import default_mapping, matrix_hamming_distance
from .config import Settings
from .convolutional import build_trellis, default_code
from .errors import PtcfskError
from .oracle import OracleConfig, exhaustive_ber
from .simulator import (
    ExperimentConfig,
    check_multi_pu_ordering,
    run_hfsk_ber,
    run_multi_pu_ber,
    run_scheme,
)

logger = logging.getLogger(__name__)

Level = Literal['quick', 'full']

H3_COEFFICIENTS = {16: 1, 20: 2, 24: 4, 28: 8}
CROSSOVER_EXIT_SUM = 0.002


class CheckResult(NamedTuple):
    name: str
    passed: bool
    detail: str
    seconds: float


def check_path_spectrum(settings: Settings, level: Level) -> tuple:
    trellis = build_trellis(default_code(3), default_mapping(3))
    coefficients = enumerate_paths(trellis, 3).coefficients
    return (
        coefficients == H3_COEFFICIENTS,
        f'a_d = {coefficients}, expected {H3_COEFFICIENTS}',
    )


def check_anchor_path(settings: Settings, level: Level) -> tuple:
    spectrum = enumerate_paths(
        build_trellis(default_code(3), default_mapping(3)), 0
    )
    _, paths = spectrum.entries[0]
    path = paths[0]
    distances = [
        matrix_hamming_distance(a, b)
        for a, b in zip(path.matrices, path.reference, strict=True)
    ]
    passed = (
        len(paths) == 1
        and path.inputs == (1, 0, 0)
        and distances == [6, 4, 6]
    )
    return passed, f'inputs {path.inputs}, branch distances {distances}'


def check_marcum_identity(settings: Settings, level: Level) -> tuple:
    w = np.linspace(0, 10, 21 if level == 'quick' else 201)
    error = float(np.max(np.abs(marcum_q1(0.0, w) - np.exp(-(w**2) / 2))))
    return error <= 1e-10, f'max |Q1(0, w) - exp(-w^2/2)| = {error:.2e}'


def check_marcum_quadrature(settings: Settings, level: Level) -> tuple:
    grid = np.linspace(0, 8, 5 if level == 'quick' else 17)
    error = max(
        abs(marcum_q1(v, w) - marcum_q1_quadrature(v, w))
        for v in grid
        for w in grid
    )
    return error <= 1e-9, f'max series vs quadrature gap = {error:.2e}'


def check_markov_occupancy(settings: Settings, level: Level) -> tuple:
    rng = np.random.default_rng(settings.experiment.seed)
    pairs, steps = (3, 100_000) if level == 'quick' else (10, 1_000_000)
    worst = 0.0
    for _ in range(pairs):
        r, p = rng.uniform(0.05, 0.95, 2)
        model = OccupancyModel.markov(1, float(r), float(p))
        fraction = float(model.trajectory(rng, 1, steps).mean())
        p_on = model.p_on
        # Correlated samples: the variance grows by (1 + lam) / (1 - lam).
        lam = 1 - r - p
        sigma = math.sqrt(p_on * (1 - p_on) / steps * (1 + lam) / (1 - lam))
        worst = max(worst, abs(fraction - p_on) / sigma)
    return worst <= 3, f'largest deviation {worst:.2f} sigma'


def _oracle_case(
    settings: Settings, H: int, snr_db: float
) -> tuple[OracleConfig, ExperimentConfig]:
    link = dataclasses.replace(settings.link_params(), H=H).with_snr_db(
        snr_db
    )
    code = default_code(H)
    mapping = default_mapping(H, 1 << code.n)
    occupancy = [OccupancyModel.always_on(1)]
    oracle = OracleConfig(
        mapping=mapping,
        code=code,
        L=settings.oracle.L,
        likelihoods=link_likelihoods(link, 1),
        occupancy=occupancy,
        budget=settings.oracle.budget,
    )
    experiment = ExperimentConfig(
        link=link,
        occupancy=occupancy,
        L=settings.oracle.L,
        grid=[snr_db],
        seed=settings.experiment.seed,
        workers=settings.experiment.workers or 1,
        chunk_packets=10_000,
        mapping=mapping,
        code=code,
        confidence=settings.experiment.confidence,
        override_sinr_guard=True,
    )
    return oracle, experiment


def check_oracle_equivalence(settings: Settings, level: Level) -> tuple:
    snrs = settings.oracle.snr_db
    if level == 'quick':
        snrs = snrs[:1]
        packets = settings.oracle.packets
    else:
        packets = math.ceil(1e7 / settings.oracle.L)
    passed = True
    details = []
    for H in (2, 3):
        for snr in snrs:
            oracle, experiment = _oracle_case(settings, H, snr)
            exact = exhaustive_ber(oracle)
            experiment = dataclasses.replace(experiment, packets=packets)
            (pt,) = run_hfsk_ber(experiment)
            inside = pt.ber_ci[0] <= exact <= pt.ber_ci[1]
            passed &= inside
            details.append(
                f'H={H} {snr:g} dB: oracle {exact:.3e}, simulated '
                f'{pt.ber:.3e} [{pt.ber_ci[0]:.3e}, {pt.ber_ci[1]:.3e}]'
            )
    return passed, '; '.join(details)


def check_proposition1(settings: Settings, level: Level) -> tuple:
    trials = 20 if level == 'quick' else 100
    mapping = default_mapping(3)
    trellis = build_trellis(default_code(3), mapping)
    spectrum = enumerate_paths(trellis, 3)
    likelihoods = link_likelihoods(settings.link_params().with_snr_db(7.0))
    row_constant = np.array([0.0, 0.35, 0.0])
    spread = proposition1_check(
        trellis,
        mapping,
        likelihoods,
        row_constant,
        trials,
        seed=settings.experiment.seed,
        spectrum=spectrum,
    )
    # Busy probability changing along the time steps of one band.
    varying = np.array([[0.0, 0.0, 0.0], [0.9, 0.1, 0.5], [0.0, 0.0, 0.0]])
    broken = proposition1_check(
        trellis,
        mapping,
        likelihoods,
        varying,
        trials,
        metric='pairwise',
        seed=settings.experiment.seed,
        spectrum=spectrum,
    )
    return (
        spread <= 1e-12 and broken > 1e-6,
        f'spread {spread:.2e} with band statistics, {broken:.2e} with '
        'step dependent statistics',
    )


def check_approximation_quality(settings: Settings, level: Level) -> tuple:
    link = dataclasses.replace(settings.link_params(), H=3)
    L = 256
    grid = [float(x) for x in range(0, 11, 2)]
    config = ExperimentConfig(
        link=link,
        occupancy=[markov_for_p_on(1, 0.35)],
        L=L,
        packets=math.ceil(1e6 / L),
        grid=grid,
        seed=settings.experiment.seed,
        workers=settings.experiment.workers or 1,
        confidence=settings.experiment.confidence,
        override_sinr_guard=True,
    )
    points = run_hfsk_ber(config)
    trellis = build_trellis(config.resolved_code, config.resolved_mapping)
    spectrum = enumerate_paths(trellis, 3)
    passed = True
    errors = {z: 0.0 for z in range(4)}
    for pt in points:
        link_x = config.link_at(pt.x)
        likelihoods = link_likelihoods(link_x, 1)
        models = config.occupancy_at(pt.x)
        p_on = p_on_per_band(models, 3)
        for z in range(4):
            estimate = approximate_ber(
                spectrum, likelihoods, p_on, z=z, occupancy=models
            )
            errors[z] += abs(pt.ber - estimate.value) / len(points)
            if z == 3:
                half = (pt.ber_ci[1] - pt.ber_ci[0]) / 2
                allowed = max(0.5 * pt.ber, 3 * half)
                passed &= abs(pt.ber - estimate.value) <= allowed
    maes = [errors[z] for z in range(4)]
    passed &= all(b <= a for a, b in zip(maes, maes[1:], strict=False))
    return passed, 'mean absolute error by z: ' + ', '.join(
        f'{e:.2e}' for e in maes
    )


def check_throughput_crossovers(settings: Settings, level: Level) -> tuple:
    link = dataclasses.replace(settings.link_params(), H=4)
    grid = [round(0.1 * i, 1) for i in range(11)]
    curves = {}
    for scheme in ('hfsk', 'opportunistic_mfsk', 'coded_bpsk_ofdm'):
        config = ExperimentConfig(
            scheme=scheme,  # type: ignore[arg-type]
            link=link,
            occupancy=[OccupancyModel.always_on(1)],
            L=256,
            packets=2000,
            axis='p_on',
            grid=grid,
            snr_db=4.0,
            Rp=100.0,
            # PU holding times of the order of a packet.
            exit_sum=CROSSOVER_EXIT_SUM,
            seed=settings.experiment.seed,
            workers=settings.experiment.workers or 1,
            override_sinr_guard=True,
        )
        curves[scheme] = np.array(
            [pt.throughput for pt in run_scheme(config)]
        )
    return compare_throughput_curves(grid, curves)


def compare_throughput_curves(
    grid: list[float], curves: dict[str, np.ndarray]
) -> tuple[bool, str]:
    """Judge the H-FSK and baseline throughput curves over P_On.

    H-FSK must deliver a flat, nonzero throughput. Each baseline must
    decrease strictly and cross H-FSK exactly once; crossings away from
    their expected location are reported but do not fail the check.
    """
    hfsk = curves['hfsk']
    if not hfsk.mean() > 0:
        return False, 'H-FSK delivers nothing'
    relative_std = float(hfsk.std() / hfsk.mean())
    passed = relative_std < 0.02
    details = [f'H-FSK relative std {relative_std:.2%}']
    for scheme, label, expected in (
        ('opportunistic_mfsk', 'p1*', 0.7),
        ('coded_bpsk_ofdm', 'p2*', 0.55),
    ):
        curve = curves[scheme]
        points = crossover(grid, curve, hfsk)
        decreasing = bool(np.all(np.diff(curve) < 0))
        passed &= decreasing and len(points) == 1
        found = ', '.join(f'{p:.2f}' for p in points) or 'none'
        note = f'{label} = {found}'
        if len(points) == 1 and abs(points[0] - expected) > 0.1:
            note += f' (expected {expected} +- 0.1)'
        if not decreasing:
            note += f', {scheme} not strictly decreasing'
        details.append(note)
    return passed, '; '.join(details)


def check_multi_pu_ordering_claims(
    settings: Settings, level: Level
) -> tuple:
    config = ExperimentConfig(
        link=settings.link_params(),
        occupancy=[OccupancyModel.always_on(1)],
        L=64,
        packets=4000,
        grid=[4.0, 7.0, 10.0],
        seed=settings.experiment.seed,
        workers=settings.experiment.workers or 1,
        confidence=settings.experiment.confidence,
        override_sinr_guard=True,
        h_values=[2, 3, 4],
        pu_counts=[1, 2, 3],
    )
    violations = check_multi_pu_ordering(run_multi_pu_ber(config))
    return not violations, '; '.join(violations) or 'all orderings hold'


def check_timing_order(settings: Settings, level: Level) -> tuple:
    oracle, _ = _oracle_case(settings, 3, 7.0)
    started = time.perf_counter()
    spectrum = enumerate_paths(oracle.trellis, 3)
    approximate_ber(spectrum, oracle.likelihoods, oracle.p_on_per_band)
    approx_seconds = time.perf_counter() - started
    started = time.perf_counter()
    exhaustive_ber(oracle)
    exact_seconds = time.perf_counter() - started
    return (
        approx_seconds < exact_seconds,
        f'approximation {approx_seconds:.3f} s, oracle {exact_seconds:.3f} s',
    )


CheckFunction = Callable[[Settings, Level], tuple]

QUICK_CHECKS: dict[str, CheckFunction] = {
    'path-spectrum': check_path_spectrum,
    'anchor-path': check_anchor_path,
    'marcum-identity': check_marcum_identity,
    'marcum-quadrature': check_marcum_quadrature,
    'markov-occupancy': check_markov_occupancy,
    'oracle-equivalence': check_oracle_equivalence,
    'proposition-1': check_proposition1,
}

FULL_CHECKS: dict[str, CheckFunction] = {
    'approximation-quality': check_approximation_quality,
    'throughput-crossovers': check_throughput_crossovers,
    'multi-pu-ordering': check_multi_pu_ordering_claims,
    'timing-order': check_timing_order,
}


def run_checks(
    settings: Settings, level: Level = 'quick'
) -> list[CheckResult]:
    """Run the checks of ``level`` in order.

    A check raising a package error counts as failed; anything else is a
    bug and propagates.

    Returns:
        list[CheckResult]: One result per check.
    """
    checks = dict(QUICK_CHECKS)
    if level == 'full':
        checks.update(FULL_CHECKS)
    results = []
    for name, check in checks.items():
        started = time.perf_counter()
        try:
            passed, detail = check(settings, level)
        except PtcfskError as e:
            passed, detail = False, f'{type(e).__name__}: {e}'
        result = CheckResult(
            name, bool(passed), detail, time.perf_counter() - started
        )
        log = logger.info if result.passed else logger.error
        log(
            f'[validate {name}] {"PASS" if result.passed else "FAIL"} '
            f'({result.seconds:.2f} s): {detail}'
        )
        results.append(result)
    return results

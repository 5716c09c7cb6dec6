import argparse
import dataclasses
import logging
import sys
import time
from pathlib import Path

from pydantic import ValidationError

from . import (
    analysis,
    channel,
    codebook,
    config,
    convolutional,
    decoder,
    oracle,
    report,
    simulator,
    validation,
)
from .analysis import (
    Metric,
    approximate_ber,
    crossover,
    enumerate_paths,
    link_likelihoods,
)
from .channel import p_on_per_band
from .config import Settings, default_workers, load_config
from .convolutional import build_trellis
from .errors import ConfigurationError, SinrGuardError
from .simulator import SCHEMES, CurvePoint

logging.basicConfig()
logger = logging.getLogger(__name__)

loggers = [
    logger,
    logging.getLogger(analysis.__name__),
    logging.getLogger(channel.__name__),
    logging.getLogger(codebook.__name__),
    logging.getLogger(config.__name__),
    logging.getLogger(convolutional.__name__),
    logging.getLogger(decoder.__name__),
    logging.getLogger(oracle.__name__),
    logging.getLogger(report.__name__),
    logging.getLogger(simulator.__name__),
    logging.getLogger(validation.__name__),
]

EXIT_OK = 0
EXIT_FAILED = 1
EXIT_CONFIG = 2


def get_args() -> argparse.Namespace:
    """Construct arguments for CLI script."""

    parser = argparse.ArgumentParser(
        description='Permutation trellis coded H-FSK under primary user '
        'interference: simulation, analysis and validation.'
    )

    parent_parser = argparse.ArgumentParser(add_help=False)
    parent_parser.add_argument(
        '-c',
        '--config',
        metavar='file',
        type=Path,
        help='INI configuration file. Without one, the built in defaults '
        '(H=3, 56 MHz first band, 6 MHz spacing, always on PU on f2) are '
        'used.',
    )
    parent_parser.add_argument(
        '-s',
        '--seed',
        type=int,
        help='Master seed, overrides [experiment] seed.',
    )
    parent_parser.add_argument(
        '-n',
        '--workers',
        metavar='number',
        type=int,
        help='Number of parallel processes. Defaults to $PTCFSK_WORKERS '
        'or the number of available logical CPUs.',
    )
    parent_parser.add_argument(
        '-o',
        '--out',
        metavar='dir',
        type=Path,
        default=Path('results'),
        help='Directory for CSV, manifest and report files. Existing '
        'files are never overwritten. Defaults to "results".',
    )
    parent_parser.add_argument(
        '--override-sinr-guard',
        action='store_true',
        default=False,
        help='Simulate even if the SU would push the PU below its minimum '
        'SINR.',
    )
    parent_parser.add_argument(
        '-v',
        '--verbose',
        action='store_true',
        help='Show a lot of verbose debugging info. Forces number of '
        'workers to 1.',
    )
    parent_parser.add_argument(
        '-q', '--quiet', action='store_true', help='Show only errors.'
    )

    subparsers = parser.add_subparsers(
        dest='command',
        required=True,
        title='supported subcommands:',
        help='Use {subcommand} --help for options.',
    )

    subparsers.add_parser(
        'ber-sim',
        parents=[parent_parser],
        help='Monte Carlo BER and throughput of the configured scheme.',
    )

    ber_approx = subparsers.add_parser(
        'ber-approx',
        parents=[parent_parser],
        help='Truncated union bound BER, one column per depth z.',
    )
    ber_approx.add_argument(
        '--z-max',
        metavar='z',
        type=int,
        help='Deepest truncation, defaults to [analysis] z_max or z.',
    )
    ber_approx.add_argument(
        '--metric',
        choices=['pattern', 'pairwise'],
        help='Path probability, defaults to [analysis] metric.',
    )

    throughput = subparsers.add_parser(
        'throughput',
        parents=[parent_parser],
        help='Throughput of all three schemes and their crossovers.',
    )
    throughput.add_argument(
        '--window-slots',
        metavar='slots',
        type=int,
        help='Slots per grid point, defaults to [experiment] '
        'window_slots or packets.',
    )

    subparsers.add_parser(
        'multi-pu',
        parents=[parent_parser],
        help='H-FSK BER with one to three PUs and the ordering checks.',
    )

    enumerate_parser = subparsers.add_parser(
        'enumerate-paths',
        parents=[parent_parser],
        help='List the error events of the lightest weight classes.',
    )
    enumerate_parser.add_argument(
        '--z',
        type=int,
        help='Weight classes above d*_free, defaults to [analysis] z.',
    )

    validate = subparsers.add_parser(
        'validate',
        parents=[parent_parser],
        help='Run the self checks.',
    )
    validate.add_argument(
        '--level',
        choices=['quick', 'full'],
        default='quick',
        help='quick runs in about a minute; full adds the acceptance '
        'scale simulations. Defaults to quick.',
    )

    args = parser.parse_args()
    return args


def _apply_overrides(settings: Settings, args: argparse.Namespace) -> None:
    update: dict = {}
    if args.seed is not None:
        update['seed'] = args.seed
    if args.workers is not None:
        update['workers'] = args.workers
    elif settings.experiment.workers is None:
        update['workers'] = default_workers()
    if args.verbose:
        update['workers'] = 1
    if args.override_sinr_guard:
        update['override_sinr_guard'] = True
    try:
        settings.experiment = settings.experiment.model_validate(
            settings.experiment.model_dump() | update
        )
    except ValidationError as e:
        raise ConfigurationError(f'command line: {e}') from e


def _manifest(command: str, settings: Settings) -> report.RunManifest:
    return report.RunManifest(
        command=command,
        config=settings.model_dump(mode='json'),
        seed=settings.experiment.seed,
        schema=Settings.model_json_schema(),
    )


def _finish(
    manifest: report.RunManifest,
    out_dir: Path,
    outputs: list[Path],
    points: list[CurvePoint],
) -> None:
    for path in outputs:
        manifest.add_output(path, out_dir)
    manifest.add_output(
        report.render_report(manifest, points, out_dir), out_dir
    )
    manifest.write(out_dir)


def cmd_ber_sim(settings: Settings, out_dir: Path) -> int:
    """Simulate the configured scheme over the grid."""
    manifest = _manifest('ber-sim', settings)
    started = time.perf_counter()
    experiment = settings.experiment_config()
    points = simulator.run_scheme(experiment)
    manifest.timed('simulate', started)
    csv_path = report.write_csv(
        points, out_dir / 'ber-sim.csv', experiment.seed
    )
    _finish(manifest, out_dir, [csv_path], points)
    return EXIT_OK


def cmd_ber_approx(
    settings: Settings,
    out_dir: Path,
    z_max: int | None = None,
    metric: Metric | None = None,
) -> int:
    """Truncated union bound over the grid for every depth up to z_max."""
    manifest = _manifest('ber-approx', settings)
    analysis_settings = settings.analysis
    if z_max is None:
        z_max = analysis_settings.z_max
    if z_max is None:
        z_max = analysis_settings.z
    metric = metric or analysis_settings.metric
    experiment = settings.experiment_config()
    grid = analysis_settings.grid or experiment.grid

    started = time.perf_counter()
    trellis = build_trellis(
        experiment.resolved_code, experiment.resolved_mapping
    )
    spectrum = enumerate_paths(trellis, z_max)
    manifest.timed('enumerate', started)
    manifest.results['d_free_star'] = spectrum.d_free_star
    manifest.results['coefficients'] = spectrum.coefficients

    started = time.perf_counter()
    rows = []
    for x in grid:
        models = experiment.occupancy_at(x)
        likelihoods = link_likelihoods(
            experiment.link_at(x), models[0].band if models else 1
        )
        p_on = p_on_per_band(models, experiment.H)
        rows.append(
            [experiment.H, float(x)]
            + [
                approximate_ber(
                    spectrum, likelihoods, p_on, metric, z, occupancy=models
                ).value
                for z in range(z_max + 1)
            ]
        )
    manifest.timed('approximate', started)
    header = ['H', 'x_value'] + [f'ber_z{z}' for z in range(z_max + 1)]
    csv_path = report.write_rows(out_dir / 'ber-approx.csv', header, rows)
    _finish(manifest, out_dir, [csv_path], [])
    return EXIT_OK


def cmd_throughput(
    settings: Settings, out_dir: Path, window_slots: int | None = None
) -> int:
    """Throughput of all schemes over the grid, plus crossovers."""
    manifest = _manifest('throughput', settings)
    window_slots = window_slots or settings.experiment.window_slots
    base = settings.experiment_config()
    curves: dict[str, list[CurvePoint]] = {}
    for scheme in SCHEMES:
        started = time.perf_counter()
        experiment = dataclasses.replace(base, scheme=scheme)
        curves[scheme] = simulator.run_throughput(experiment, window_slots)
        manifest.timed(scheme, started)

    x = [pt.x for pt in curves['hfsk']]
    hfsk = [pt.throughput for pt in curves['hfsk']]
    for scheme in SCHEMES[1:]:
        other = [pt.throughput for pt in curves[scheme]]
        manifest.results[f'crossover {scheme}'] = crossover(x, other, hfsk)
    rows = [
        [pt.x]
        + [curves[scheme][i].throughput for scheme in SCHEMES]
        + [pt.analytical_throughput]
        for i, pt in enumerate(curves['hfsk'])
    ]
    header = ['x_value', *SCHEMES, 'hfsk_analytical']
    points = [pt for scheme in SCHEMES for pt in curves[scheme]]
    outputs = [
        report.write_rows(out_dir / 'throughput.csv', header, rows),
        report.write_csv(
            points, out_dir / 'throughput-curves.csv', base.seed
        ),
    ]
    _finish(manifest, out_dir, outputs, points)
    return EXIT_OK


def cmd_multi_pu(settings: Settings, out_dir: Path) -> int:
    """BER for growing PU counts and H, with the ordering checks."""
    manifest = _manifest('multi-pu', settings)
    started = time.perf_counter()
    experiment = settings.experiment_config()
    points = simulator.run_multi_pu_ber(experiment)
    manifest.timed('simulate', started)
    violations = simulator.check_multi_pu_ordering(points)
    manifest.results['ordering violations'] = violations
    csv_path = report.write_csv(
        points, out_dir / 'multi-pu.csv', experiment.seed
    )
    _finish(manifest, out_dir, [csv_path], points)
    for violation in violations:
        logger.error(f'[multi-pu] {violation}')
    return EXIT_FAILED if violations else EXIT_OK


def cmd_enumerate_paths(
    settings: Settings, out_dir: Path, z: int | None = None
) -> int:
    """Write every error event of the z + 1 lightest weight classes."""
    manifest = _manifest('enumerate-paths', settings)
    z = settings.analysis.z if z is None else z
    experiment = settings.experiment_config()
    started = time.perf_counter()
    trellis = build_trellis(
        experiment.resolved_code, experiment.resolved_mapping
    )
    spectrum = enumerate_paths(trellis, z)
    manifest.timed('enumerate', started)
    manifest.results['d_free_star'] = spectrum.d_free_star
    manifest.results['coefficients'] = spectrum.coefficients
    print(
        'T(D) = '
        + ' + '.join(
            f'{a}*D^{d}' for d, a in spectrum.coefficients.items()
        )
    )
    rows = [
        [
            path.weight,
            ' '.join(str(i) for i in path.inputs),
            ' '.join(str(s) for s in path.symbols),
            path.input_weight,
        ]
        for path in spectrum.paths()
    ]
    csv_path = report.write_rows(
        out_dir / 'enumerate-paths.csv',
        ['d', 'inputs', 'symbols', 'input_weight'],
        rows,
    )
    _finish(manifest, out_dir, [csv_path], [])
    return EXIT_OK


def cmd_validate(
    settings: Settings, out_dir: Path, level: validation.Level
) -> int:
    """Run the self checks; exit code 1 if any fails."""
    manifest = _manifest('validate', settings)
    results = validation.run_checks(settings, level)
    for result in results:
        manifest.results[result.name] = (
            f'{"PASS" if result.passed else "FAIL"}: {result.detail}'
        )
        manifest.timings[result.name] = round(result.seconds, 6)
        print(
            f'{"PASS" if result.passed else "FAIL"}  {result.name:<24}'
            f'{result.seconds:8.2f} s  {result.detail}'
        )
    _finish(manifest, out_dir, [], [])
    return EXIT_OK if all(r.passed for r in results) else EXIT_FAILED


def main():
    # Set up argument parser
    args = get_args()

    if args.verbose:
        new_log_level = logging.DEBUG
        if args.quiet:
            logging.warning('Overriding --quiet with --verbose.')
    elif args.quiet:
        new_log_level = logging.ERROR
    else:  # verbose and quiet both false = normal output
        new_log_level = logging.INFO

    for lgr in loggers:
        lgr.setLevel(new_log_level)
    logger.debug(f'Registered loggers: {logging.root.manager.loggerDict}')

    try:
        settings = load_config(args.config)
        _apply_overrides(settings, args)
    except ConfigurationError as e:
        logger.error(f'Invalid configuration: {e}')
        sys.exit(EXIT_CONFIG)

    try:
        args.out.mkdir(parents=True, exist_ok=True)
    except OSError as e:
        logger.error(f'Could not create output directory {args.out}. {e}')
        sys.exit(EXIT_CONFIG)

    try:
        if args.command == 'ber-sim':
            code = cmd_ber_sim(settings, args.out)
        elif args.command == 'ber-approx':
            code = cmd_ber_approx(
                settings, args.out, args.z_max, args.metric
            )
        elif args.command == 'throughput':
            code = cmd_throughput(settings, args.out, args.window_slots)
        elif args.command == 'multi-pu':
            code = cmd_multi_pu(settings, args.out)
        elif args.command == 'enumerate-paths':
            code = cmd_enumerate_paths(settings, args.out, args.z)
        elif args.command == 'validate':
            code = cmd_validate(settings, args.out, args.level)
        else:
            raise ValueError(f'Could not process arguments: {sys.argv}')
    except SinrGuardError as e:
        logger.error(f'[{args.command}] {e}')
        sys.exit(EXIT_FAILED)
    except ConfigurationError as e:
        logger.error(f'[{args.command}] Invalid configuration: {e}')
        sys.exit(EXIT_CONFIG)
    except OSError as e:
        logger.error(f'[{args.command}] {e}')
        sys.exit(EXIT_CONFIG)

    if code != EXIT_OK:
        sys.exit(code)


if __name__ == '__main__':
    main()

"""Run artifacts: CSV tables, the run manifest and an HTML summary.

Output files are never overwritten. If a name is taken the next free
``name_N.ext`` is used, so repeated runs into one directory keep every
result.
"""

import csv
import hashlib
import json
import logging
import os
import time
from collections.abc import Iterable, Sequence
from dataclasses import asdict, dataclass, field
from importlib.metadata import PackageNotFoundError, version
from pathlib import Path
from typing import Any, TextIO

from hurry.filesize import size  # type: ignore
from markdown import markdown

from .simulator import CurvePoint

logger = logging.getLogger(__name__)

CSV_COLUMNS = (
    'scheme',
    'H',
    'x_value',
    'ber',
    'ber_ci_lo',
    'ber_ci_hi',
    'throughput',
    'packets',
    'seed',
    'bit_errors',
    'pu_count',
    'occupancy',
)


def tool_version() -> str:
    try:
        return version('ptcfsk')
    except PackageNotFoundError:
        return 'unknown'


@dataclass
class _Output:
    """File written by a run.

    Attributes:
        name (str): File name relative to the output directory.
        size (int): Size in bytes.
        md5sum (str): MD5 hex digest of the content.
    """

    name: str
    size: int
    md5sum: str


def _describe(path: Path, base: Path) -> _Output:
    data = path.read_bytes()
    _hash = hashlib.md5()
    _hash.update(data)
    try:
        name = str(path.relative_to(base))
    except ValueError:
        name = str(path)
    return _Output(name=name, size=len(data), md5sum=_hash.hexdigest())


def open_exclusive(path: Path) -> TextIO:
    """Create a new text file, adding ``_1``, ``_2``, ... on conflict.

    Multiprocessing Safety:
        Exclusive creation means two runs writing the same name never
        share a file.

    Note:
        The caller closes the file.

    Example:
        If "ber.csv" exists:
        >>> open_exclusive(Path('ber.csv')).name
        'ber_1.csv'
    """
    try:
        return open(path, 'x', encoding='utf-8', newline='')  # noqa: SIM115
    except FileExistsError as e:
        logger.debug(f'Could not open {path} exclusively. {e}')

    counter = 1
    while True:
        candidate = path.parent / f'{path.stem}_{counter}{path.suffix}'
        try:
            return open(  # noqa: SIM115
                candidate, 'x', encoding='utf-8', newline=''
            )
        except FileExistsError as e:
            logger.debug(f'Could not open {candidate} exclusively. {e}')
            counter += 1


def _cell(value: Any) -> str:
    if isinstance(value, float):
        return repr(value)
    if value is None:
        return ''
    return str(value)


def write_rows(
    path: Path, header: Sequence[str], rows: Iterable[Sequence[Any]]
) -> Path:
    """Write a CSV table; floats are written with full precision.

    Returns:
        Path: The file actually written.
    """
    with open_exclusive(path) as f:
        writer = csv.writer(f, lineterminator='\n')
        writer.writerow(header)
        for row in rows:
            writer.writerow([_cell(v) for v in row])
        written = Path(f.name)
    logger.info(f'Wrote {written}')
    return written


def curve_rows(points: Iterable[CurvePoint], seed: int) -> list[list]:
    return [
        [
            pt.scheme,
            pt.H,
            pt.x,
            pt.ber,
            pt.ber_ci[0],
            pt.ber_ci[1],
            pt.throughput,
            pt.packets,
            seed,
            pt.bit_errors,
            pt.pu_count,
            pt.occupancy,
        ]
        for pt in points
    ]


def write_csv(points: Sequence[CurvePoint], path: Path, seed: int) -> Path:
    """One row per curve point in :data:`CSV_COLUMNS` order.

    Same points and seed give the same bytes.
    """
    return write_rows(path, CSV_COLUMNS, curve_rows(points, seed))


@dataclass
class RunManifest:
    """Everything needed to repeat a command.

    Attributes:
        command (str): Subcommand name.
        config (dict): Validated configuration after command line
            overrides.
        seed (int): Master seed.
        schema (dict): JSON schema of the configuration.
        version (str): Installed ptcfsk version.
        outputs (list[_Output]): Files written, with size and checksum.
        timings (dict[str, float]): Wall clock seconds per stage.
        results (dict): Command specific findings, e.g. path spectrum
            coefficients or crossovers.
    """

    command: str
    config: dict
    seed: int
    schema: dict = field(default_factory=dict)
    version: str = field(default_factory=tool_version)
    outputs: list[_Output] = field(default_factory=list)
    timings: dict[str, float] = field(default_factory=dict)
    results: dict[str, Any] = field(default_factory=dict)

    def add_output(self, path: Path, base: Path) -> None:
        self.outputs.append(_describe(path, base))

    def timed(self, stage: str, started: float) -> None:
        self.timings[stage] = round(time.perf_counter() - started, 6)

    def write(self, out_dir: Path) -> Path:
        path = out_dir / f'{self.command}-manifest.json'
        with open_exclusive(path) as f:
            json.dump(asdict(self), f, indent=2, default=str)
            f.write(os.linesep)
            written = Path(f.name)
        logger.info(f'Wrote {written}')
        return written


def _markdown_table(header: Sequence[str], rows: Iterable[Sequence]) -> str:
    lines = [
        '| ' + ' | '.join(header) + ' |',
        '|' + '---|' * len(header),
    ]
    for row in rows:
        cells = [f'{v:.4g}' if isinstance(v, float) else str(v) for v in row]
        lines.append('| ' + ' | '.join(cells) + ' |')
    return '\n'.join(lines)


def render_report(
    manifest: RunManifest,
    points: Sequence[CurvePoint],
    out_dir: Path,
) -> Path:
    """Summarize a run as an HTML page next to its CSV.

    The page is written from Markdown: run parameters, the curve points and
    the list of output files with human readable sizes.
    """
    parts = [
        f'# ptcfsk {manifest.command}',
        f'Version {manifest.version}, seed {manifest.seed}.',
    ]
    if points:
        parts.append('## Results')
        parts.append(
            _markdown_table(
                ('scheme', 'H', 'x', 'BER', 'throughput', 'packets', 'PUs'),
                (
                    (
                        p.scheme,
                        p.H,
                        p.x,
                        p.ber,
                        p.throughput,
                        p.packets,
                        f'{p.pu_count} {p.occupancy}',
                    )
                    for p in points
                ),
            )
        )
    for key, value in manifest.results.items():
        parts.append(f'- **{key}**: {value}')
    if manifest.outputs:
        parts.append('## Files')
        parts.append(
            _markdown_table(
                ('name', 'size', 'md5sum'),
                ((o.name, size(o.size), o.md5sum) for o in manifest.outputs),
            )
        )
    if manifest.timings:
        parts.append('## Timings')
        parts.extend(
            f'- {stage}: {seconds:.3f} s'
            for stage, seconds in manifest.timings.items()
        )
    html = markdown('\n\n'.join(parts), extensions=['tables'])
    with open_exclusive(out_dir / f'{manifest.command}-report.html') as f:
        f.write(html)
        written = Path(f.name)
    logger.info(f'Wrote {written}')
    return written

"""Run configuration: INI text checked against pydantic models.

A configuration file has one section per concern::

    [link]
    H = 3
    P_T_SU = 4e-3

    [occupancy]
    kind = markov
    bands = 2
    r = 0.13
    p = 0.07

    [experiment]
    grid = 0:10:1

Every key is optional; defaults reproduce the high interference scenario.
Bands are numbered from 1 in files (f1, f2, ...) and from 0 in code.
"""

import configparser
import logging
import os
import re
from pathlib import Path
from typing import Any, Literal

import numpy as np
from pydantic import (
    BaseModel,
    ConfigDict,
    Field,
    PositiveFloat,
    ValidationError,
    field_validator,
)

from .analysis import CellLikelihoods, link_likelihoods
from .channel import LinkParams, OccupancyModel
from .codebook import PermutationMapping, default_mapping, load_mapping
from .convolutional import ConvCode, default_code
from .errors import ConfigurationError, DomainError
from .oracle import OracleConfig
from .simulator import ExperimentConfig

logger = logging.getLogger(__name__)

WORKERS_ENV = 'PTCFSK_WORKERS'

_SECTION_RE = re.compile(r'^\s*\[([^\]]+)\]')
_KEY_RE = re.compile(r'^\s*([^=:#;\s][^=:]*?)\s*[=:]')


def _split(value: Any) -> Any:
    if isinstance(value, str):
        return [item.strip() for item in value.split(',') if item.strip()]
    return value


def parse_grid(value: Any) -> Any:
    """Parse ``a, b, c`` or an inclusive range ``start:stop:step``."""
    if not isinstance(value, str):
        return value
    if ':' not in value:
        return [float(item) for item in _split(value)]
    parts = [float(p) for p in value.split(':')]
    if len(parts) != 3 or parts[2] <= 0:
        raise ValueError('range grids take the form start:stop:step')
    start, stop, step = parts
    count = int(np.floor((stop - start) / step + 1e-9)) + 1
    return [round(start + i * step, 12) for i in range(max(count, 0))]


class _Section(BaseModel):
    model_config = ConfigDict(extra='forbid')


class LinkSection(_Section):
    P_T_SU: PositiveFloat = 4e-3
    P_T_PU: PositiveFloat = 1e6
    N0: PositiveFloat = 2.5e-14
    f1: PositiveFloat = 56e6
    band_spacing: float = Field(6e6, ge=0)
    H: int = Field(3, ge=2)
    T_s: PositiveFloat = 1e-5
    d_su: PositiveFloat = 10.0
    d_pu: PositiveFloat = 10.0
    G_l: PositiveFloat = 1.0
    sinr_min: float = Field(10.0, ge=0)
    d_pu_link: PositiveFloat = 10.0
    d_su_pu: PositiveFloat = 10.0

    def params(self) -> LinkParams:
        return LinkParams(**self.model_dump())


class CodeSection(_Section):
    generators: list[str] | None = None
    memory: int = Field(2, ge=0)
    m: int = Field(1, ge=1)
    mapping: Path | None = None

    _split_generators = field_validator('generators', mode='before')(_split)


class OccupancySection(_Section):
    kind: Literal['always_on', 'always_off', 'markov', 'none'] = 'always_on'
    bands: list[int] = [2]
    r: float = Field(0.1, ge=0, le=1)
    p: float = Field(0.1, ge=0, le=1)
    exit_sum: float = Field(0.2, gt=0, le=1)

    _split_bands = field_validator('bands', mode='before')(_split)

    @field_validator('bands')
    @classmethod
    def _one_based(cls, bands: list[int]) -> list[int]:
        if any(b < 1 for b in bands) or len(set(bands)) != len(bands):
            raise ValueError('bands are distinct numbers starting at 1')
        return bands

    def models(self) -> list[OccupancyModel]:
        if self.kind == 'none':
            return []
        if self.kind == 'markov':
            return [
                OccupancyModel.markov(b - 1, self.r, self.p)
                for b in self.bands
            ]
        return [OccupancyModel(self.kind, b - 1) for b in self.bands]


class ExperimentSection(_Section):
    scheme: Literal['hfsk', 'opportunistic_mfsk', 'coded_bpsk_ofdm'] = 'hfsk'
    L: int = Field(256, ge=1)
    packets: int = Field(1000, ge=1)
    axis: Literal['snr', 'p_on'] = 'snr'
    grid: list[float] = [7.0]
    snr_db: float | None = None
    Rp: PositiveFloat = 100.0
    seed: int = Field(0, ge=0)
    workers: int | None = Field(None, ge=1)
    chunk_packets: int = Field(200, ge=1)
    energy_normalization: Literal['info-bit', 'coded-symbol'] = 'info-bit'
    confidence: float = Field(0.99, gt=0, lt=1)
    window_slots: int | None = Field(None, ge=1)
    h_values: list[int] = []
    pu_counts: list[int] = [1, 2, 3]
    pu_kinds: list[Literal['always_on', 'markov']] = ['always_on', 'markov']
    dynamic_p_on: float = Field(0.35, ge=0, le=1)
    override_sinr_guard: bool = False

    _parse_grid = field_validator('grid', mode='before')(parse_grid)
    _split_lists = field_validator(
        'h_values', 'pu_counts', 'pu_kinds', mode='before'
    )(_split)

    @field_validator('grid')
    @classmethod
    def _nonempty(cls, grid: list[float]) -> list[float]:
        if not grid:
            raise ValueError('grid is empty')
        return grid


class AnalysisSection(_Section):
    z: int = Field(3, ge=0)
    z_max: int | None = Field(None, ge=0)
    metric: Literal['pattern', 'pairwise'] = 'pairwise'
    grid: list[float] | None = None

    _parse_grid = field_validator('grid', mode='before')(parse_grid)


class OracleSection(_Section):
    L: int = Field(3, ge=1)
    snr_db: list[float] = [4.0, 7.0, 10.0]
    budget: int = Field(1 << 26, ge=1)
    packets: int = Field(20000, ge=1)

    _parse_snr = field_validator('snr_db', mode='before')(parse_grid)


class Settings(BaseModel):
    """Complete, validated run configuration."""

    model_config = ConfigDict(extra='forbid')

    link: LinkSection = LinkSection()
    code: CodeSection = CodeSection()
    occupancy: OccupancySection = OccupancySection()
    experiment: ExperimentSection = ExperimentSection()
    analysis: AnalysisSection = AnalysisSection()
    oracle: OracleSection = OracleSection()

    def link_params(self) -> LinkParams:
        try:
            return self.link.params()
        except DomainError as e:
            raise ConfigurationError(f'[link] {e}') from e

    def conv_code(self) -> ConvCode:
        if self.code.generators is None:
            return default_code(self.link.H)
        return ConvCode(
            m=self.code.m,
            n=len(self.code.generators),
            memory=self.code.memory,
            generators=tuple(self.code.generators),
        )

    def permutation_mapping(self) -> PermutationMapping | None:
        if self.code.mapping is None:
            return None
        mapping = load_mapping(self.code.mapping)
        if mapping.H != self.link.H:
            raise ConfigurationError(
                f'{self.code.mapping} is an H={mapping.H} mapping, the '
                f'link has H={self.link.H}.'
            )
        return mapping

    def occupancy_models(self) -> list[OccupancyModel]:
        models = self.occupancy.models()
        if any(model.band >= self.link.H for model in models):
            raise ConfigurationError(
                f'[occupancy] bands must not exceed H={self.link.H}.'
            )
        return models

    def experiment_config(self, **overrides) -> ExperimentConfig:
        """Build the simulator configuration.

        Keyword arguments replace experiment fields, e.g. ``seed`` or
        ``workers`` given on the command line.
        """
        exp = self.experiment
        values: dict[str, Any] = dict(
            scheme=exp.scheme,
            link=self.link_params(),
            occupancy=self.occupancy_models(),
            L=exp.L,
            packets=exp.packets,
            axis=exp.axis,
            grid=list(exp.grid),
            snr_db=exp.snr_db,
            exit_sum=self.occupancy.exit_sum,
            Rp=exp.Rp,
            seed=exp.seed,
            workers=exp.workers or default_workers(),
            chunk_packets=exp.chunk_packets,
            mapping=self.permutation_mapping(),
            code=self.conv_code(),
            energy_normalization=exp.energy_normalization,
            confidence=exp.confidence,
            override_sinr_guard=exp.override_sinr_guard,
            z=self.analysis.z,
            h_values=list(exp.h_values),
            pu_counts=list(exp.pu_counts),
            pu_kinds=list(exp.pu_kinds),
            dynamic_p_on=exp.dynamic_p_on,
        )
        values.update({k: v for k, v in overrides.items() if v is not None})
        return ExperimentConfig(**values)

    def likelihoods(self, snr_db: float | None = None) -> CellLikelihoods:
        params = self.link_params()
        if snr_db is not None:
            params = params.with_snr_db(snr_db)
        models = self.occupancy_models()
        return link_likelihoods(params, models[0].band if models else 1)

    def oracle_config(self, snr_db: float) -> OracleConfig:
        mapping = self.permutation_mapping()
        code = self.conv_code()
        if mapping is None:
            mapping = default_mapping(self.link.H, 1 << code.n)
        return OracleConfig(
            mapping=mapping,
            code=code,
            L=self.oracle.L,
            likelihoods=self.likelihoods(snr_db),
            occupancy=self.occupancy_models(),
            budget=self.oracle.budget,
        )


def default_workers() -> int:
    """Worker count from PTCFSK_WORKERS, else the usable CPUs."""
    value = os.environ.get(WORKERS_ENV)
    if value:
        try:
            workers = int(value)
        except ValueError as e:
            raise ConfigurationError(
                f'{WORKERS_ENV}={value!r} is not an integer.'
            ) from e
        if workers < 1:
            raise ConfigurationError(f'{WORKERS_ENV} must be at least 1.')
        return workers
    if hasattr(os, 'sched_getaffinity'):
        return len(os.sched_getaffinity(0))
    return os.cpu_count() or 1


def _line_index(text: str) -> dict[tuple[str, str | None], int]:
    """Line number of every section header and key."""
    index: dict[tuple[str, str | None], int] = {}
    section = ''
    for lineno, line in enumerate(text.splitlines(), start=1):
        if match := _SECTION_RE.match(line):
            section = match.group(1).strip()
            index.setdefault((section, None), lineno)
        elif (match := _KEY_RE.match(line)) and section:
            index.setdefault((section, match.group(1).strip()), lineno)
    return index


def parse_config(text: str, source: str = '<string>') -> Settings:
    """Validate configuration text.

    Raises:
        ConfigurationError: With the offending line for syntax errors,
            unknown sections or keys and invalid values.
    """
    parser = configparser.ConfigParser(interpolation=None)
    parser.optionxform = str  # type: ignore[assignment,method-assign]
    try:
        parser.read_string(text, source=source)
    except configparser.ParsingError as e:
        errors = getattr(e, 'errors', None)
        lineno = errors[0][0] if errors else getattr(e, 'lineno', None)
        raise ConfigurationError(
            f'{source}: cannot parse configuration', line=lineno
        ) from e
    except configparser.Error as e:
        raise ConfigurationError(
            f'{source}: {e.message}', line=getattr(e, 'lineno', None)
        ) from e

    lines = _line_index(text)
    data = {name: dict(parser[name]) for name in parser.sections()}
    try:
        settings = Settings.model_validate(data)
    except ValidationError as e:
        error = e.errors()[0]
        loc = [str(part) for part in error['loc']]
        section = loc[0] if loc else ''
        key = loc[1] if len(loc) > 1 else None
        lineno = lines.get((section, key), lines.get((section, None)))
        where = '.'.join(loc)
        raise ConfigurationError(
            f'{source}: {where}: {error["msg"]}', line=lineno
        ) from e

    mapping_path = settings.code.mapping
    if mapping_path is not None and not mapping_path.is_absolute():
        base = Path(source).parent if source != '<string>' else Path()
        settings.code.mapping = base / mapping_path
    logger.debug(f'Configuration from {source}: {settings.model_dump()}')
    return settings


def load_config(path: Path | None) -> Settings:
    """Read and validate a configuration file; None gives the defaults.

    Raises:
        ConfigurationError: If the file cannot be read or is invalid.
    """
    if path is None:
        return Settings()
    try:
        text = Path(path).read_text(encoding='utf-8')
    except OSError as e:
        raise ConfigurationError(f'Cannot read {path}: {e}') from e
    return parse_config(text, source=str(path))

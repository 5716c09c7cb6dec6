"""Radio layer arithmetic, PU occupancy and the cell level channel.

The channel is statistical: every cell (band j, time step k) of a code
matrix goes through its own non-coherent quadrature receiver. A time step
lasts T_s and the tone sent in it carries the received SU energy E_s^r.
The in-phase and quadrature outputs are Gaussian with variance N0/2
around a mean of amplitude sqrt(E) and uniform phase, where E is E_s^r if
the SU transmits on the cell and no PU is active, the PU interference
energy I_PU if a PU is active on the band, and zero otherwise. A cell
decodes to 1 when its envelope reaches 0.6 sqrt(E_s^r), 60% of the SU
tone amplitude.
"""

import dataclasses
import logging
import math
from dataclasses import dataclass, field
from typing import Literal, NamedTuple

import numpy as np

from .codebook import CodeMatrix
from .errors import DegenerateModelError, DomainError, SinrGuardError

logger = logging.getLogger(__name__)

SPEED_OF_LIGHT = 299_792_458.0
THRESHOLD_FACTOR = 0.6


@dataclass(frozen=True)
class LinkParams:
    """Radio layer scalars of one SU link next to the PUs.

    Defaults are the high interference scenario: 56 MHz lowest band,
    6 MHz spacing, a 1 MW PU and all distances 10 m.

    Attributes:
        P_T_SU (float): SU transmit power on f1 in W.
        P_T_PU (float): PU transmit power in W.
        N0 (float): Noise power spectral density in W/Hz.
        f1 (float): Lowest band center frequency in Hz.
        band_spacing (float): Distance between band centers in Hz.
        H (int): Number of bands.
        T_s (float): Duration of one time step, one tone, in s. A code
            matrix lasts H T_s.
        d_su (float): SU transmitter to SU receiver distance in m.
        d_pu (float): PU transmitter to SU receiver distance in m.
        G_l (float): Antenna gain product.
        C (float): Speed of light in m/s.
        sinr_min (float): Minimum SINR the PU receiver needs.
        d_pu_link (float): PU transmitter to PU receiver distance in m.
        d_su_pu (float): SU transmitter to PU receiver distance in m.
    """

    P_T_SU: float = 4e-3
    P_T_PU: float = 1e6
    N0: float = 2.5e-14
    f1: float = 56e6
    band_spacing: float = 6e6
    H: int = 3
    T_s: float = 1e-5
    d_su: float = 10.0
    d_pu: float = 10.0
    G_l: float = 1.0
    C: float = SPEED_OF_LIGHT
    sinr_min: float = 10.0
    d_pu_link: float = 10.0
    d_su_pu: float = 10.0

    def __post_init__(self):
        positive = (
            'P_T_SU',
            'P_T_PU',
            'N0',
            'f1',
            'T_s',
            'd_su',
            'd_pu',
            'G_l',
            'C',
            'd_pu_link',
            'd_su_pu',
        )
        for name in positive:
            if not getattr(self, name) > 0:
                raise DomainError(f'{name} must be positive.')
        if self.band_spacing < 0 or self.sinr_min < 0:
            raise DomainError('band_spacing and sinr_min must be >= 0.')
        if self.H < 2:
            raise DomainError(f'H must be at least 2, got {self.H}.')

    @property
    def frequencies(self) -> list[float]:
        return [self.f1 + j * self.band_spacing for j in range(self.H)]

    @property
    def snr_db(self) -> float:
        """E_s^r / N0 in dB."""
        return 10 * math.log10(derive_energies(self).Es_r / self.N0)

    def with_snr_db(self, snr_db: float) -> 'LinkParams':
        """Copy with P_T_SU rescaled so that E_s^r / N0 is ``snr_db``."""
        factor = 10 ** ((snr_db - self.snr_db) / 10)
        return dataclasses.replace(self, P_T_SU=self.P_T_SU * factor)


@dataclass(frozen=True)
class DerivedEnergies:
    """Per tone energies at the SU receiver.

    Attributes:
        Es_r (float): Received SU energy of one tone in J.
        I_PU (float): PU interference energy over one time step in J.
    """

    Es_r: float
    I_PU: float

    def __post_init__(self):
        if self.Es_r < 0 or self.I_PU < 0:
            raise DomainError('Energies must be nonnegative.')

    @property
    def threshold(self) -> float:
        return THRESHOLD_FACTOR * math.sqrt(self.Es_r)


class SinrCheck(NamedTuple):
    sinr: float
    passed: bool


def received_power(
    P_T: float, f: float, d: float, G_l: float = 1.0, C: float = SPEED_OF_LIGHT
) -> float:
    """Free space received power P_T (sqrt(G_l) lambda / (4 pi d))**2.

    Raises:
        DomainError: If f or d is not positive.
    """
    if f <= 0 or d <= 0:
        raise DomainError(f'Frequency and distance must be positive: {f}, {d}')
    wavelength = C / f
    return P_T * (math.sqrt(G_l) * wavelength / (4 * math.pi * d)) ** 2


def band_powers(
    P_T: float, f1: float, band_spacing: float, H: int
) -> list[float]:
    """Transmit powers equalizing the received power over H bands.

    The target is the power received on f1 when transmitting P_T.
    """
    return [P_T * ((f1 + j * band_spacing) / f1) ** 2 for j in range(H)]


def per_band_power_adjust(params: LinkParams) -> list[float]:
    """SU transmit power per band so every band arrives equally strong."""
    return band_powers(params.P_T_SU, params.f1, params.band_spacing, params.H)


def check_pu_sinr(
    params: LinkParams, P_I_SU: float, band: int = 1
) -> SinrCheck:
    """SINR at the PU receiver on ``band`` given SU interference P_I_SU."""
    f = params.frequencies[band]
    P_R_PU = received_power(
        params.P_T_PU, f, params.d_pu_link, params.G_l, params.C
    )
    sinr = P_R_PU / (params.N0 + P_I_SU)
    return SinrCheck(sinr=sinr, passed=sinr >= params.sinr_min)


def su_interference_at_pu(params: LinkParams, band: int = 1) -> float:
    """Power the SU puts on the PU receiver when it transmits on ``band``."""
    P_T = per_band_power_adjust(params)[band]
    return received_power(
        P_T, params.frequencies[band], params.d_su_pu, params.G_l, params.C
    )


def enforce_sinr_guard(
    params: LinkParams, pu_bands: list[int], override: bool = False
) -> None:
    """Refuse links that push any PU receiver below its SINR threshold.

    Raises:
        SinrGuardError: Unless ``override`` is set.
    """
    for band in pu_bands:
        P_I_SU = su_interference_at_pu(params, band)
        check = check_pu_sinr(params, P_I_SU, band)
        if check.passed:
            continue
        message = (
            f'PU on f{band + 1}: SINR {check.sinr:.4g} below '
            f'{params.sinr_min:.4g}.'
        )
        if not override:
            raise SinrGuardError(message)
        logger.warning(f'{message} Continuing, SINR guard overridden.')


def derive_energies(params: LinkParams, pu_band: int = 1) -> DerivedEnergies:
    """Received SU symbol energy and PU interference energy.

    The SU powers are equalized per band, so E_s^r follows from f1. The PU
    energy is evaluated at the center of ``pu_band``.
    """
    P_R_SU = received_power(
        params.P_T_SU, params.f1, params.d_su, params.G_l, params.C
    )
    f_pu = params.f1 + pu_band * params.band_spacing
    P_I_PU = received_power(
        params.P_T_PU, f_pu, params.d_pu, params.G_l, params.C
    )
    return DerivedEnergies(Es_r=P_R_SU * params.T_s, I_PU=P_I_PU * params.T_s)


OccupancyKind = Literal['always_on', 'always_off', 'markov']


@dataclass
class OccupancyModel:
    """On/Off activity of the PU pinned to one band.

    The Markov variant leaves On with probability r and leaves Off with
    probability p per time step, so its steady state is
    P_Off = r / (r + p) and P_On = p / (r + p).

    Attributes:
        kind (OccupancyKind): Variant.
        band (int): Zero based index of the occupied band.
        r (float): On to Off probability per step.
        p (float): Off to On probability per step.
        state (bool | None): Current state, None until initialized.
    """

    kind: OccupancyKind
    band: int
    r: float = 0.0
    p: float = 0.0
    state: bool | None = field(default=None, compare=False)

    def __post_init__(self):
        if self.kind not in ('always_on', 'always_off', 'markov'):
            raise DomainError(f'Unknown occupancy kind {self.kind!r}.')
        if not (0 <= self.r <= 1 and 0 <= self.p <= 1):
            raise DomainError(f'r={self.r}, p={self.p} outside [0, 1].')
        if self.band < 0:
            raise DomainError(f'Band index must be >= 0, got {self.band}.')

    @classmethod
    def always_on(cls, band: int) -> 'OccupancyModel':
        return cls('always_on', band)

    @classmethod
    def always_off(cls, band: int) -> 'OccupancyModel':
        return cls('always_off', band)

    @classmethod
    def markov(cls, band: int, r: float, p: float) -> 'OccupancyModel':
        return cls('markov', band, r=r, p=p)

    @property
    def p_on(self) -> float:
        """Steady state probability of the band being busy."""
        return steady_state(self)[1]

    def chain(self) -> tuple[np.ndarray, np.ndarray]:
        """Steady state and transition matrix per step, index 0 = Off."""
        if self.kind == 'always_on':
            return np.array([0.0, 1.0]), np.array([[0.0, 1.0], [0.0, 1.0]])
        if self.kind == 'always_off':
            return np.array([1.0, 0.0]), np.array([[1.0, 0.0], [1.0, 0.0]])
        init = np.array(steady_state(self))
        trans = np.array([[1 - self.p, self.p], [self.r, 1 - self.r]])
        return init, trans

    def initialize(self, rng: np.random.Generator) -> bool:
        """Draw the initial state from the steady state."""
        self.state = bool(rng.random() < self.p_on)
        return self.state

    def trajectory(
        self, rng: np.random.Generator, packets: int, steps: int
    ) -> np.ndarray:
        """Independent On/Off trajectories, one per packet.

        Each trajectory starts from the steady state.

        Returns:
            np.ndarray: bool array of shape (packets, steps).
        """
        if self.kind == 'always_on':
            return np.ones((packets, steps), dtype=bool)
        if self.kind == 'always_off':
            return np.zeros((packets, steps), dtype=bool)
        out = np.empty((packets, steps), dtype=bool)
        if steps == 0:
            return out
        on = rng.random(packets) < self.p_on
        out[:, 0] = on
        draws = rng.random((packets, steps - 1))
        for k in range(1, steps):
            u = draws[:, k - 1]
            on = np.where(on, u >= self.r, u < self.p)
            out[:, k] = on
        return out


def markov_for_p_on(
    band: int, p_on: float, exit_sum: float = 0.2
) -> OccupancyModel:
    """Markov model with steady state On probability ``p_on``.

    ``exit_sum`` = r + p sets how fast the chain mixes; the mean cycle of
    one On and one Off period lasts 1/r + 1/p steps.
    """
    if not 0 <= p_on <= 1:
        raise DomainError(f'P_On must lie in [0, 1], got {p_on}.')
    if not 0 < exit_sum <= 1:
        raise DomainError(f'exit_sum must lie in (0, 1], got {exit_sum}.')
    return OccupancyModel.markov(
        band, r=(1 - p_on) * exit_sum, p=p_on * exit_sum
    )


def steady_state(model: OccupancyModel) -> tuple[float, float]:
    """Return (P_Off, P_On).

    Raises:
        DegenerateModelError: For a Markov model with r + p = 0.
    """
    if model.kind == 'always_on':
        return 0.0, 1.0
    if model.kind == 'always_off':
        return 1.0, 0.0
    total = model.r + model.p
    if total == 0:
        raise DegenerateModelError(
            'Markov model with r + p = 0 has no unique steady state.'
        )
    return model.r / total, model.p / total


def occupancy_step(model: OccupancyModel, rng: np.random.Generator) -> bool:
    """Advance the model by one time step and return the new state."""
    if model.state is None:
        model.initialize(rng)
    if model.kind == 'always_on':
        model.state = True
    elif model.kind == 'always_off':
        model.state = False
    elif model.state:
        model.state = bool(rng.random() >= model.r)
    else:
        model.state = bool(rng.random() < model.p)
    return model.state


def p_on_per_band(models: list[OccupancyModel], H: int) -> np.ndarray:
    """Steady state busy probability of every band, shape (H,).

    Independent PUs sharing a band keep it busy while any of them is On,
    1 - prod(1 - P_On).
    """
    p_off = np.ones(H)
    for model in models:
        if model.band >= H:
            raise DomainError(f'PU band f{model.band + 1} beyond H={H}.')
        p_off[model.band] *= 1 - model.p_on
    return 1 - p_off


@dataclass(frozen=True, eq=False)
class ReceivedMatrix:
    """H x H hard decisions b_{j,k}; any binary pattern is possible."""

    cells: np.ndarray = field(repr=False)

    def __post_init__(self):
        cells = np.asarray(self.cells, dtype=np.uint8)
        if cells.ndim != 2 or np.any(cells > 1):
            raise DomainError('Received matrix must be a 2D binary array.')
        object.__setattr__(self, 'cells', cells)

    def __eq__(self, other):
        if not isinstance(other, (ReceivedMatrix, CodeMatrix)):
            return NotImplemented
        return np.array_equal(self.cells, other.cells)

    __hash__ = None  # type: ignore[assignment]


def demodulate(
    q: np.ndarray,
    pu_active: np.ndarray,
    energies: DerivedEnergies,
    N0: float,
    H: int,
    rng: np.random.Generator,
) -> np.ndarray:
    """Hard decisions for an array of cells.

    An active PU dominates the cell; the SU contribution is then dropped.
    Every cell is an independent tone of energy E_s^r, so the decision
    statistics are the same for every H.

    Args:
        q (np.ndarray): Transmitted bits.
        pu_active (np.ndarray): PU presence per cell, broadcastable to q.
        energies (DerivedEnergies): Received energies.
        N0 (float): Noise spectral density; each quadrature gets N0/2.
        H (int): Bands (and time steps) per code matrix. Arrays of two or
            more dimensions must end in H x H matrices.
        rng (np.random.Generator): Random source.

    Returns:
        np.ndarray: uint8 decisions, shape of q.

    Raises:
        DomainError: If the trailing axes are not H x H.
    """
    q = np.asarray(q, dtype=bool)
    if q.ndim >= 2 and q.shape[-2:] != (H, H):
        raise DomainError(f'Cells of shape {q.shape} are not {H}x{H}.')
    pu_active = np.broadcast_to(np.asarray(pu_active, dtype=bool), q.shape)
    su_amp = math.sqrt(energies.Es_r)
    pu_amp = math.sqrt(energies.I_PU)
    theta = rng.uniform(0.0, 2 * math.pi, q.shape)
    phi = rng.uniform(0.0, 2 * math.pi, q.shape)
    amp = np.where(pu_active, pu_amp, np.where(q, su_amp, 0.0))
    phase = np.where(pu_active, phi, theta)
    sigma = math.sqrt(N0 / 2)
    x_i = amp * np.cos(phase) + sigma * rng.standard_normal(q.shape)
    x_q = amp * np.sin(phase) + sigma * rng.standard_normal(q.shape)
    return (np.hypot(x_i, x_q) >= energies.threshold).astype(np.uint8)


def demodulate_cell(
    q: int,
    pu_active: bool,
    energies: DerivedEnergies,
    N0: float,
    H: int,
    rng: np.random.Generator,
) -> int:
    """Hard decision b for a single cell, see :func:`demodulate`."""
    b = demodulate(np.array(q), np.array(pu_active), energies, N0, H, rng)
    return int(b)


def transmit_matrix(
    T: CodeMatrix,
    occupancy: np.ndarray,
    energies: DerivedEnergies,
    N0: float,
    rng: np.random.Generator,
) -> ReceivedMatrix:
    """Send one code matrix through the channel.

    Args:
        T (CodeMatrix): Transmitted matrix.
        occupancy (np.ndarray): PU state per (band, time step), shape (H, H).
        energies (DerivedEnergies): Received energies.
        N0 (float): Noise spectral density.
        rng (np.random.Generator): Random source.
    """
    cells = demodulate(T.cells, occupancy, energies, N0, T.H, rng)
    return ReceivedMatrix(cells)


def pu_cell_mask(
    models: list[OccupancyModel],
    rng: np.random.Generator,
    packets: int,
    branches: int,
    H: int,
) -> np.ndarray:
    """PU presence per cell for a batch of packets.

    Every PU walks its own trajectory across the time steps of a packet
    and lights up its band row.

    Returns:
        np.ndarray: bool array of shape (packets, branches, H, H).
    """
    mask = np.zeros((packets, branches, H, H), dtype=bool)
    for model in models:
        if model.band >= H:
            raise DomainError(f'PU band f{model.band + 1} beyond H={H}.')
        traj = model.trajectory(rng, packets, branches * H)
        mask[:, :, model.band, :] |= traj.reshape(packets, branches, H)
    return mask

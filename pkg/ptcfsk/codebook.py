"""Symbol to permutation code matrix mappings.

A code matrix is an H x H binary permutation matrix. Rows are frequency
bands f_1..f_H, columns are time steps. Column k holds a single 1 in the
row of the band transmitted at time step k. Code matrices are serialized
column by column so an expanded codeword lists transmissions in time order.
"""

import itertools
import logging
import math
from collections.abc import Iterable, Sequence
from dataclasses import dataclass, field
from functools import cached_property
from pathlib import Path

import numpy as np

from .errors import ConfigurationError, DomainError

logger = logging.getLogger(__name__)

# Mapping of symbols into permutation code matrices, M = H = 2.
TABLE_H2 = ((1, 2), (2, 1))
# Mapping of symbols into permutation code matrices, M = 4, H = 3.
TABLE_H3 = ((2, 3, 1), (2, 1, 3), (1, 3, 2), (1, 2, 3))


@dataclass(frozen=True)
class PermutationMapping:
    """Table of M distinct permutations of the bands 1..H.

    Entry ``table[s][k]`` is the (1 based) band transmitted at time step k
    when symbol s is sent.

    Attributes:
        H (int): Number of bands, equal to the number of time steps.
        table (tuple[tuple[int, ...], ...]): M permutation vectors.

    Raises:
        DomainError: If an entry is not a permutation of 1..H, entries
            repeat or M is not a power of two.
    """

    H: int
    table: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        object.__setattr__(
            self, 'table', tuple(tuple(int(b) for b in p) for p in self.table)
        )
        if self.H < 1:
            raise DomainError(f'H must be positive, got {self.H}.')
        bands = set(range(1, self.H + 1))
        for symbol, perm in enumerate(self.table):
            if len(perm) != self.H or set(perm) != bands:
                raise DomainError(
                    f'Entry {symbol} ({_perm_str(perm)}) is not a '
                    f'permutation of 1..{self.H}.'
                )
        if len(set(self.table)) != len(self.table):
            raise DomainError('Mapping entries are not distinct.')
        if self.M < 1 or self.M & (self.M - 1):
            raise DomainError(f'M must be a power of two, got {self.M}.')

    @property
    def M(self) -> int:
        return len(self.table)

    @property
    def m(self) -> int:
        """Bits per symbol, log2(M)."""
        return self.M.bit_length() - 1

    @cached_property
    def matrices(self) -> np.ndarray:
        """All code matrices as a uint8 array of shape (M, H, H)."""
        out = np.zeros((self.M, self.H, self.H), dtype=np.uint8)
        cols = np.arange(self.H)
        for symbol, perm in enumerate(self.table):
            out[symbol, np.asarray(perm) - 1, cols] = 1
        out.flags.writeable = False
        return out

    @cached_property
    def distances(self) -> np.ndarray:
        """Pairwise matrix Hamming distances, shape (M, M)."""
        flat = self.matrices.reshape(self.M, -1).astype(np.int64)
        return np.abs(flat[:, None, :] - flat[None, :, :]).sum(axis=2)


@dataclass(frozen=True, eq=False)
class CodeMatrix:
    """H x H binary permutation matrix q_{j,k}.

    Attributes:
        cells (np.ndarray): uint8 array, rows are bands, columns time steps.
    """

    cells: np.ndarray = field(repr=False)

    def __post_init__(self):
        cells = np.array(self.cells, dtype=np.uint8)
        if cells.ndim != 2 or cells.shape[0] != cells.shape[1]:
            raise DomainError(f'Code matrix must be square, got {cells.shape}')
        if not (
            np.all(cells.sum(axis=0) == 1) and np.all(cells.sum(axis=1) == 1)
        ):
            raise DomainError('Code matrix is not a permutation matrix.')
        cells.flags.writeable = False
        object.__setattr__(self, 'cells', cells)

    @classmethod
    def from_permutation(cls, perm: Sequence[int]) -> 'CodeMatrix':
        H = len(perm)
        cells = np.zeros((H, H), dtype=np.uint8)
        cells[np.asarray(perm) - 1, np.arange(H)] = 1
        return cls(cells)

    @property
    def H(self) -> int:
        return self.cells.shape[0]

    @property
    def permutation(self) -> tuple[int, ...]:
        """Band index (1 based) per time step."""
        return tuple(int(j) + 1 for j in self.cells.argmax(axis=0))

    def flat(self) -> np.ndarray:
        """Column major (time ordered) serialization."""
        return self.cells.flatten(order='F')

    def __eq__(self, other):
        if not isinstance(other, CodeMatrix):
            return NotImplemented
        return np.array_equal(self.cells, other.cells)

    def __hash__(self):
        return hash(self.permutation)

    def __repr__(self):
        return f'CodeMatrix({_perm_str(self.permutation)})'


@dataclass(frozen=True, eq=False)
class ExpandedCodeword:
    """Concatenated column major code matrices of a trellis path.

    Attributes:
        bits (np.ndarray): uint8 array of length branch_count * H**2.
        L (int): Packet size in information bits.
        branch_count (int): Number of trellis branches (L + memory when
            terminated).
    """

    bits: np.ndarray = field(repr=False)
    L: int
    branch_count: int

    def __post_init__(self):
        bits = np.asarray(self.bits, dtype=np.uint8)
        if self.branch_count and bits.size % self.branch_count:
            raise DomainError('Codeword length is not a multiple of stages.')
        bits.flags.writeable = False
        object.__setattr__(self, 'bits', bits)

    def __len__(self):
        return int(self.bits.size)

    @property
    def weight(self) -> int:
        return int(self.bits.sum())

    def blocks(self, H: int) -> np.ndarray:
        """Per branch code matrices, shape (branch_count, H, H)."""
        return self.bits.reshape(-1, H, H).transpose(0, 2, 1)


def map_symbol(mapping: PermutationMapping, symbol: int) -> CodeMatrix:
    """Return the code matrix a symbol is mapped onto.

    Args:
        mapping (PermutationMapping): Symbol table.
        symbol (int): Symbol index in [0, M).

    Returns:
        CodeMatrix: Matrix whose column k has its 1 in row table[symbol][k].

    Raises:
        DomainError: If symbol is out of range.

    Example:
        >>> map_symbol(default_mapping(3), 0b01).permutation
        (2, 1, 3)
    """
    if not 0 <= symbol < mapping.M:
        raise DomainError(f'Symbol {symbol} out of range [0, {mapping.M}).')
    return CodeMatrix(mapping.matrices[symbol])


def matrix_hamming_distance(a, b) -> int:
    """Count differing cells of two equally sized binary matrices.

    Accepts :class:`CodeMatrix`, received matrices or plain arrays.

    Raises:
        DomainError: If the matrices differ in size.
    """
    ca = np.asarray(getattr(a, 'cells', a))
    cb = np.asarray(getattr(b, 'cells', b))
    if ca.shape != cb.shape:
        raise DomainError(f'Matrix sizes differ: {ca.shape} vs {cb.shape}.')
    return int(np.count_nonzero(ca != cb))


def expand_codeword(
    mapping: PermutationMapping,
    symbols: Iterable[int],
    L: int | None = None,
) -> ExpandedCodeword:
    """Concatenate the code matrices mapped from a symbol sequence.

    Args:
        mapping (PermutationMapping): Symbol table.
        symbols (Iterable[int]): Encoder output symbols, one per branch.
        L (int | None): Packet size in information bits. Defaults to the
            number of symbols.

    Returns:
        ExpandedCodeword: Length len(symbols) * H**2, empty for no symbols.

    Raises:
        DomainError: If any symbol is out of range.
    """
    symbols = np.asarray(list(symbols), dtype=np.int64)
    if symbols.size and (symbols.min() < 0 or symbols.max() >= mapping.M):
        raise DomainError(f'Symbols must lie in [0, {mapping.M}).')
    blocks = mapping.matrices[symbols].transpose(0, 2, 1)
    return ExpandedCodeword(
        bits=blocks.reshape(-1),
        L=len(symbols) if L is None else L,
        branch_count=len(symbols),
    )


def construct_mapping(H: int, M: int) -> PermutationMapping:
    """Greedily pick M permutations of 1..H with large minimum distance.

    Starts from the identity and repeatedly adds the permutation maximizing
    its minimum distance to those already picked. Ties go to the
    lexicographically smallest permutation, so the result is deterministic.

    Args:
        H (int): Number of bands.
        M (int): Number of symbols, a power of two not above H!.

    Returns:
        PermutationMapping: Symbol s is the s-th permutation picked.

    Raises:
        DomainError: If M > H!.
    """
    if H < 1 or M > math.factorial(H):
        raise DomainError(f'Cannot pick {M} distinct permutations of {H}.')
    perms = np.array(list(itertools.permutations(range(1, H + 1))))
    picked = [0]
    min_dist = 2 * np.count_nonzero(perms != perms[0], axis=1)
    min_dist[0] = -1
    while len(picked) < M:
        best = int(np.argmax(min_dist))
        picked.append(best)
        dist = 2 * np.count_nonzero(perms != perms[best], axis=1)
        min_dist = np.minimum(min_dist, dist)
        min_dist[picked] = -1
    table = tuple(tuple(int(b) for b in perms[i]) for i in picked)
    logger.debug(
        f'Constructed H={H} mapping: {[_perm_str(p) for p in table]}'
    )
    return PermutationMapping(H=H, table=table)


def default_mapping(H: int, M: int | None = None) -> PermutationMapping:
    """Return the mapping used when no mapping file is configured.

    H = 2 and H = 3 use the published tables, larger H the greedy
    constructor with M = 4 unless given.
    """
    if H == 2 and M in (None, 2):
        return PermutationMapping(H=2, table=TABLE_H2)
    if H == 3 and M in (None, 4):
        return PermutationMapping(H=3, table=TABLE_H3)
    return construct_mapping(H, 4 if M is None else M)


def load_mapping(path: Path) -> PermutationMapping:
    """Read a mapping file.

    One line per symbol: ``SYMBOL_BITS PERM``, e.g. ``01 213``. PERM is a
    digit string for H <= 9, otherwise comma separated band numbers. Blank
    lines and lines starting with ``#`` are ignored.

    Raises:
        ConfigurationError: With the offending line number if the file does
            not describe a valid mapping.
    """
    entries: dict[int, tuple[int, ...]] = {}
    width = None
    with open(path, encoding='utf-8') as f:
        for lineno, raw in enumerate(f, start=1):
            line = raw.split('#', 1)[0].strip()
            if not line:
                continue
            try:
                bits, perm_str = line.split()
                symbol = int(bits, 2)
                perm = _parse_perm(perm_str)
            except ValueError as e:
                raise ConfigurationError(
                    f'expected "SYMBOL_BITS PERM", got {raw.strip()!r}',
                    line=lineno,
                ) from e
            if width is None:
                width = len(bits)
            if len(bits) != width or symbol in entries:
                raise ConfigurationError(
                    f'symbol {bits} repeated or of inconsistent width',
                    line=lineno,
                )
            entries[symbol] = perm
    if not entries or sorted(entries) != list(range(len(entries))):
        raise ConfigurationError(f'{path}: symbols must cover 0..M-1.')
    table = tuple(entries[s] for s in range(len(entries)))
    try:
        return PermutationMapping(H=len(table[0]), table=table)
    except DomainError as e:
        raise ConfigurationError(f'{path}: {e}') from e


def dump_mapping(mapping: PermutationMapping) -> str:
    """Render a mapping in the mapping file format."""
    width = max(mapping.m, 1)
    return ''.join(
        f'{symbol:0{width}b} {_perm_str(perm)}\n'
        for symbol, perm in enumerate(mapping.table)
    )


def _parse_perm(perm_str: str) -> tuple[int, ...]:
    if ',' in perm_str:
        return tuple(int(b) for b in perm_str.split(','))
    return tuple(int(c) for c in perm_str)


def _perm_str(perm: Sequence[int]) -> str:
    if all(b < 10 for b in perm):
        return ''.join(str(b) for b in perm)
    return ','.join(str(b) for b in perm)

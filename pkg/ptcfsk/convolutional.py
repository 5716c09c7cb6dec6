"""Feedforward convolutional encoder and its trellis.

Controller form: the shift register holds the current m input bits in its
most significant positions followed by ``memory`` earlier input blocks.
Output bit j is the parity of the register masked with generator j, and
output bits are packed into a symbol with generator 0 as the most
significant bit. With generators 7, 5 the input [1, 0, 0] produces symbols
11, 10, 11.
"""

import logging
from collections.abc import Iterator, Sequence
from dataclasses import dataclass, field
from functools import cached_property
from typing import NamedTuple

import numpy as np

from .codebook import PermutationMapping
from .errors import ConfigurationError, DomainError

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class ConvCode:
    """Rate m/n feedforward convolutional code.

    Attributes:
        m (int): Input bits per branch.
        n (int): Output bits per branch.
        memory (int): Shift register stages per input bit. Zero gives a
            pass-through code.
        generators (tuple[str, ...]): n octal tap masks over the
            m * (memory + 1) register bits.

    Raises:
        ConfigurationError: On a generator count or width mismatch.
    """

    m: int = 1
    n: int = 2
    memory: int = 2
    generators: tuple[str, ...] = ('7', '5')

    def __post_init__(self):
        object.__setattr__(
            self, 'generators', tuple(str(g) for g in self.generators)
        )
        if self.m < 1 or self.n < 1 or self.memory < 0:
            raise ConfigurationError(
                f'Invalid code dimensions m={self.m}, n={self.n}, '
                f'memory={self.memory}.'
            )
        if len(self.generators) != self.n:
            raise ConfigurationError(
                f'Expected {self.n} generators, got {len(self.generators)}.'
            )
        width = self.m * (self.memory + 1)
        for g in self.generators:
            try:
                tap = int(g, 8)
            except ValueError as e:
                raise ConfigurationError(
                    f'Generator {g!r} is not an octal number.'
                ) from e
            if tap <= 0 or tap.bit_length() > width:
                raise ConfigurationError(
                    f'Generator {g} does not fit a {width} bit register.'
                )

    @classmethod
    def identity(cls, m: int = 1) -> 'ConvCode':
        """Memory-less code passing m input bits straight to the output."""
        gens = tuple(format(1 << (m - 1 - j), 'o') for j in range(m))
        return cls(m=m, n=m, memory=0, generators=gens)

    @cached_property
    def taps(self) -> tuple[int, ...]:
        return tuple(int(g, 8) for g in self.generators)

    @property
    def n_states(self) -> int:
        return 1 << (self.m * self.memory)

    @property
    def n_inputs(self) -> int:
        return 1 << self.m

    @property
    def rate(self) -> float:
        return self.m / self.n

    def step(self, state: int, inputs: int) -> tuple[int, int]:
        """Clock the register once.

        Args:
            state (int): Current state, the previous ``memory`` input blocks.
            inputs (int): m input bits, first bit most significant.

        Returns:
            tuple[int, int]: (next_state, output symbol).
        """
        register = (inputs << (self.m * self.memory)) | state
        symbol = 0
        for tap in self.taps:
            symbol = (symbol << 1) | (bin(register & tap).count('1') & 1)
        return register >> self.m, symbol


def default_code(H: int) -> ConvCode:
    """Code used for H bands when none is configured.

    H = 2 only offers two permutations, so its code is the rate 1
    pass-through. Larger H use the rate 1/2 (7, 5) code.
    """
    return ConvCode.identity() if H == 2 else ConvCode()


def encode(
    code: ConvCode,
    bits: Sequence[int],
    terminate: bool = False,
    initial_state: int = 0,
) -> list[int]:
    """Encode information bits into n bit output symbols.

    Args:
        code (ConvCode): The code.
        bits (Sequence[int]): Information bits, a multiple of m long.
        terminate (bool): Append ``memory`` all-zero input blocks driving the
            register back to state 0.
        initial_state (int): Register state to resume from.

    Returns:
        list[int]: One symbol per branch.

    Example:
        >>> encode(ConvCode(), [1, 0, 0])
        [3, 2, 3]
    """
    symbols, _ = encode_with_state(code, bits, terminate, initial_state)
    return symbols


def encode_with_state(
    code: ConvCode,
    bits: Sequence[int],
    terminate: bool = False,
    initial_state: int = 0,
) -> tuple[list[int], int]:
    """Same as :func:`encode` but also return the final register state."""
    blocks = _input_blocks(code, bits)
    if terminate:
        blocks += [0] * code.memory
    state = initial_state
    symbols = []
    for block in blocks:
        state, symbol = code.step(state, block)
        symbols.append(symbol)
    return symbols, state


def encode_batch(
    code: ConvCode, bits: np.ndarray, terminate: bool = True
) -> np.ndarray:
    """Encode a batch of packets at once.

    Args:
        code (ConvCode): The code.
        bits (np.ndarray): Shape (packets, L) with L a multiple of m.
        terminate (bool): Append ``memory`` zero input blocks per packet.

    Returns:
        np.ndarray: int64 symbols of shape (packets, L / m [+ memory]).
    """
    bits = np.asarray(bits, dtype=np.int64)
    if bits.ndim != 2 or bits.shape[1] % code.m:
        raise DomainError(f'Cannot encode bit array of shape {bits.shape}.')
    packets = bits.shape[0]
    weights = 1 << np.arange(code.m - 1, -1, -1)
    blocks = bits.reshape(packets, -1, code.m) @ weights
    if terminate:
        blocks = np.hstack(
            [blocks, np.zeros((packets, code.memory), dtype=np.int64)]
        )
    next_state, output = _tables(code)
    state = np.zeros(packets, dtype=np.int64)
    symbols = np.empty_like(blocks)
    for u in range(blocks.shape[1]):
        symbols[:, u] = output[state, blocks[:, u]]
        state = next_state[state, blocks[:, u]]
    return symbols


class Branch(NamedTuple):
    state: int
    inputs: int
    next_state: int
    symbol: int


@dataclass(frozen=True, eq=False)
class Trellis:
    """State graph of a code with branches labelled by code matrices.

    Attributes:
        code (ConvCode): The convolutional code.
        mapping (PermutationMapping | None): Symbol to code matrix mapping.
            None labels branches with the raw n coded bits.
        next_state (np.ndarray): Shape (n_states, n_inputs).
        output (np.ndarray): Output symbol per branch, same shape.
    """

    code: ConvCode
    mapping: PermutationMapping | None
    next_state: np.ndarray = field(repr=False)
    output: np.ndarray = field(repr=False)

    @property
    def n_states(self) -> int:
        return self.code.n_states

    @property
    def n_inputs(self) -> int:
        return self.code.n_inputs

    @property
    def H(self) -> int:
        if self.mapping is None:
            raise DomainError('A binary trellis has no code matrices.')
        return self.mapping.H

    def stage_count(self, L: int) -> int:
        """Number of stages of a terminated packet of L bits."""
        return L // self.code.m + self.code.memory

    @cached_property
    def branch_matrices(self) -> np.ndarray:
        """Code matrix per branch, shape (n_states, n_inputs, H, H)."""
        if self.mapping is None:
            raise DomainError('A binary trellis has no code matrices.')
        return self.mapping.matrices[self.output]

    @cached_property
    def labels(self) -> np.ndarray:
        """Flat branch labels the decoder compares against.

        Code matrices flattened row by row, or the n coded bits (first
        generator first) of a binary trellis. Shape (n_states, n_inputs,
        width).
        """
        if self.mapping is None:
            shifts = np.arange(self.code.n - 1, -1, -1)
            return ((self.output[:, :, None] >> shifts) & 1).astype(np.uint8)
        return self.branch_matrices.reshape(
            self.n_states, self.n_inputs, self.H * self.H
        )

    @cached_property
    def predecessors(self) -> tuple[np.ndarray, np.ndarray]:
        """Incoming branches per state, ordered by (state, input).

        Returns:
            tuple[np.ndarray, np.ndarray]: prev_state and prev_input arrays
                of shape (n_states, n_inputs).
        """
        incoming: list[list[tuple[int, int]]] = [
            [] for _ in range(self.n_states)
        ]
        for s in range(self.n_states):
            for i in range(self.n_inputs):
                incoming[int(self.next_state[s, i])].append((s, i))
        for ns, branches in enumerate(incoming):
            if len(branches) != self.n_inputs:
                raise ConfigurationError(
                    f'State {ns} has {len(branches)} incoming branches.'
                )
            branches.sort()
        prev = np.array(incoming, dtype=np.int64)
        return prev[:, :, 0], prev[:, :, 1]

    def branches(self) -> Iterator[Branch]:
        for s in range(self.n_states):
            for i in range(self.n_inputs):
                yield Branch(
                    s, i, int(self.next_state[s, i]), int(self.output[s, i])
                )


def build_trellis(
    code: ConvCode, mapping: PermutationMapping | None = None
) -> Trellis:
    """Build the trellis of a code whose symbols are mapped by ``mapping``.

    Without a mapping the branches carry the coded bits themselves, as
    needed for binary antipodal signalling.

    Raises:
        ConfigurationError: If the code emits n bits but the mapping holds
            other than 2**n symbols.
    """
    if mapping is not None and mapping.M != 1 << code.n:
        raise ConfigurationError(
            f'Code emits {code.n} bit symbols but the H={mapping.H} mapping '
            f'holds {mapping.M} symbols.'
        )
    next_state, output = _tables(code)
    logger.debug(
        f'Trellis: {code.n_states} states, {code.n_inputs} inputs, '
        f'generators {",".join(code.generators)}'
    )
    return Trellis(
        code=code, mapping=mapping, next_state=next_state, output=output
    )


def _tables(code: ConvCode) -> tuple[np.ndarray, np.ndarray]:
    next_state = np.empty((code.n_states, code.n_inputs), dtype=np.int64)
    output = np.empty_like(next_state)
    for s in range(code.n_states):
        for i in range(code.n_inputs):
            next_state[s, i], output[s, i] = code.step(s, i)
    return next_state, output


def _input_blocks(code: ConvCode, bits: Sequence[int]) -> list[int]:
    bits = [int(b) for b in bits]
    if len(bits) % code.m:
        raise DomainError(
            f'{len(bits)} bits do not split into blocks of {code.m}.'
        )
    blocks = []
    for i in range(0, len(bits), code.m):
        block = 0
        for b in bits[i : i + code.m]:
            if b not in (0, 1):
                raise DomainError(f'Not a bit: {b}.')
            block = (block << 1) | b
        blocks.append(block)
    return blocks

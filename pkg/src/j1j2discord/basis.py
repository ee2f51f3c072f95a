"""Bit-coded basis states of a spin-1/2 ring.

Bit ``i`` of a state integer holds site ``i``. A set bit is a reversed spin,
i.e. the qubit state ``|1>`` with sigma^z eigenvalue -1; ``n_up`` counts the
set bits.
"""
from dataclasses import dataclass, field
from math import comb

import numpy as np

from .errors import ArgumentError

MAX_SITES = 16


@dataclass(frozen=True)
class ChainSpec:
    """Periodic J1-J2 ring. Energies are in units of ``j1``."""

    n_sites: int
    j2: float = 0.0
    j1: float = 1.0

    def __post_init__(self):
        if not isinstance(self.n_sites, (int, np.integer)) or isinstance(self.n_sites, bool):
            raise ArgumentError(f"n_sites must be an integer, got {self.n_sites!r}")
        if self.n_sites % 2 or not 4 <= self.n_sites <= MAX_SITES:
            raise ArgumentError(f"n_sites must be even and in [4, {MAX_SITES}], got {self.n_sites}")
        if self.j1 != 1.0:
            raise ArgumentError("j1 is the energy unit and must equal 1")
        if not np.isfinite(self.j2):
            raise ArgumentError("j2 must be finite")

    @property
    def boundary(self):
        return "periodic"

    @property
    def antiferro_nnn(self):
        """False for negative (ferromagnetic) j2, which is accepted but outside the studied range."""
        return self.j2 >= 0.0

    def with_j2(self, j2):
        return ChainSpec(self.n_sites, float(j2), self.j1)


def popcount(x):
    """Vectorised number of set bits."""
    return np.bitwise_count(np.asarray(x, dtype=np.int64)).astype(np.int64)


@dataclass(frozen=True, eq=False)
class SzSectorBasis:
    """All ``n_sites``-bit states with exactly ``n_up`` set bits, ascending."""

    n_sites: int
    n_up: int
    states: np.ndarray
    _table: np.ndarray = field(repr=False)

    def __len__(self):
        return len(self.states)

    @property
    def dim(self):
        return len(self.states)

    def lookup(self, mask):
        """Ordinal index of ``mask`` (scalar or array); -1 where not in the sector."""
        idx = self._table[np.asarray(mask, dtype=np.int64)]
        return int(idx) if np.ndim(idx) == 0 else idx


def enumerate_sector(n_sites, n_up):
    """Return the sector basis of ``n_sites`` spins with ``n_up`` reversed spins."""
    if not 0 <= n_sites <= MAX_SITES:
        raise ArgumentError(f"n_sites must be in [0, {MAX_SITES}], got {n_sites}")
    if not 0 <= n_up <= n_sites:
        raise ArgumentError(f"n_up must be in [0, {n_sites}], got {n_up}")
    allstates = np.arange(1 << n_sites, dtype=np.int64)
    states = allstates[popcount(allstates) == n_up]
    states.setflags(write=False)
    table = np.full(1 << n_sites, -1, dtype=np.int64)
    table[states] = np.arange(len(states))
    table.setflags(write=False)
    assert len(states) == comb(n_sites, n_up)
    return SzSectorBasis(n_sites, n_up, states, table)


def translate(state, n_sites):
    """Cyclic right shift of the written bit string ``|m_1 m_2 ... m_N>``.

    The lowest bit wraps to the top: ``0b0001 -> 0b1000`` for four sites.
    Works on scalars and integer arrays.
    """
    s = np.asarray(state, dtype=np.int64)
    out = (s >> 1) | ((s & 1) << (n_sites - 1))
    return int(out) if np.ndim(out) == 0 else out

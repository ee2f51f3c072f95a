"""J1-J2 Heisenberg ring restricted to a fixed-magnetization sector.

H = sum_{i=0}^{N-1} [J1 s_i.s_{i+1} + J2 s_i.s_{i+2}], indices mod N, s = sigma/2.
The sum runs over every i, so on the 4-site ring each next-nearest pair
appears twice.
"""
from dataclasses import dataclass, field
from functools import cached_property

import numpy as np
import scipy.sparse as sp

from .basis import ChainSpec, SzSectorBasis, enumerate_sector
from .errors import ArgumentError, CapacityError

DENSE_CAP = 4096


def bond_list(n_sites, j1=1.0, j2=0.0):
    """(i, j, coupling) for every term of the literal site sum."""
    bonds = []
    for i in range(n_sites):
        if j1 != 0.0:
            bonds.append((i, (i + 1) % n_sites, float(j1)))
        if j2 != 0.0:
            bonds.append((i, (i + 2) % n_sites, float(j2)))
    return bonds


def _bond_terms(states, index_of, bonds):
    """Diagonal vector and per-bond (rows, cols, amplitude) hopping arrays."""
    diag = np.zeros(len(states))
    hops = []
    for i, j, coupling in bonds:
        aligned = ((states >> i) & 1) == ((states >> j) & 1)
        diag += np.where(aligned, 0.25 * coupling, -0.25 * coupling)
        rows = np.flatnonzero(~aligned)
        cols = index_of(states[rows] ^ ((1 << i) | (1 << j)))
        hops.append((rows, cols, 0.5 * coupling))
    return diag, hops


@dataclass(frozen=True, eq=False)
class SectorOperator:
    """The Hamiltonian of ``spec`` acting inside ``basis``.

    ``bonds`` defaults to the J1-J2 bond list of ``spec``; pass a different list
    to get e.g. the J2-derivative operator (see :func:`nnn_operator`).
    """

    spec: ChainSpec
    basis: SzSectorBasis
    bonds: tuple = None
    _dense: list = field(default_factory=list, repr=False)

    def __post_init__(self):
        if self.basis.n_sites != self.spec.n_sites:
            raise ArgumentError("basis and spec disagree on the number of sites")
        if self.bonds is None:
            object.__setattr__(self, "bonds", tuple(bond_list(self.spec.n_sites, self.spec.j1, self.spec.j2)))

    @property
    def dim(self):
        return self.basis.dim

    @cached_property
    def _terms(self):
        return _bond_terms(self.basis.states, self.basis.lookup, self.bonds)

    @cached_property
    def sparse(self):
        """CSR form, used by the iterative solver."""
        diag, hops = self._terms
        n = self.dim
        rows = np.concatenate([np.arange(n)] + [r for r, _, _ in hops])
        cols = np.concatenate([np.arange(n)] + [c for _, c, _ in hops])
        vals = np.concatenate([diag] + [np.full(len(r), a) for r, _, a in hops])
        return sp.csr_matrix((vals, (rows, cols)), shape=(n, n))

    @property
    def dense(self):
        """Materialised matrix, or None if :func:`build_dense` was never called."""
        return self._dense[0] if self._dense else None


def sector_operator(spec, n_up):
    return SectorOperator(spec, enumerate_sector(spec.n_sites, n_up))


def nnn_operator(spec, basis):
    """dH/dJ2 in the given sector: the J2 bonds with unit coupling."""
    return SectorOperator(spec, basis, tuple(bond_list(spec.n_sites, 0.0, 1.0)))


def apply_h(op, v):
    """Matrix-free H @ v (also accepts a (dim, k) block of vectors)."""
    v = np.asarray(v)
    if v.shape[0] != op.dim:
        raise ArgumentError(f"vector length {v.shape[0]} does not match sector dimension {op.dim}")
    diag, hops = op._terms
    out = diag.reshape((-1,) + (1,) * (v.ndim - 1)) * v
    for rows, cols, amp in hops:
        # each row has at most one partner per bond, so plain fancy assignment is safe
        out[rows] += amp * v[cols]
    return out


def build_dense(op, cap=DENSE_CAP):
    """Dense symmetric matrix of ``op``; refuses sectors larger than ``cap``."""
    if op.dim > cap:
        raise CapacityError(
            f"sector dimension {op.dim} exceeds dense cap {cap}; use the Lanczos path instead"
        )
    if not op._dense:
        op._dense.append(op.sparse.toarray())
    return op._dense[0]


def full_space_hamiltonian(spec, bonds=None):
    """Sparse H on the whole 2^N space, indexed by bitmask."""
    n = spec.n_sites
    states = np.arange(1 << n, dtype=np.int64)
    if bonds is None:
        bonds = bond_list(n, spec.j1, spec.j2)
    diag, hops = _bond_terms(states, lambda m: m, bonds)
    rows = np.concatenate([states] + [r for r, _, _ in hops])
    cols = np.concatenate([states] + [c for _, c, _ in hops])
    vals = np.concatenate([diag] + [np.full(len(r), a) for r, _, a in hops])
    return sp.csr_matrix((vals, (rows, cols)), shape=(1 << n, 1 << n))

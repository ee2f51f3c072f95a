"""Two-site reduced states of eigen-mixtures, X-form parameters, correlators and Bloch form.

Two-qubit matrices use the basis |00>, |01>, |10>, |11> of sites (i, j), first
label = site i, and the qubit label equals the bit of the state integer.
"""
from dataclasses import dataclass

import numpy as np

from .errors import ArgumentError, StructureError

I2 = np.eye(2, dtype=complex)
SX = np.array([[0, 1], [1, 0]], dtype=complex)
SY = np.array([[0, -1j], [1j, 0]], dtype=complex)
SZ = np.array([[1, 0], [0, -1]], dtype=complex)
PAULI = (SX, SY, SZ)

X_TOL = 1e-8


@dataclass(frozen=True, eq=False)
class TwoSiteRDM:
    matrix: np.ndarray
    site_pair: tuple = (0, 1)
    n_sites: int = None

    @property
    def pair_kind(self):
        """'NN', 'NNN' or 'far' by ring distance."""
        i, j = self.site_pair
        d = abs(j - i)
        if self.n_sites:
            d = min(d, self.n_sites - d)
        return {1: "NN", 2: "NNN"}.get(d, "far")


@dataclass(frozen=True)
class CorrelatorSet:
    cxx: float
    cyy: float
    czz: float

    @property
    def c_scalar(self):
        """<sigma_i . sigma_j> / 3, the per-component value for SU(2)-symmetric states."""
        return (self.cxx + self.cyy + self.czz) / 3.0

    @property
    def dot(self):
        """<sigma_i . sigma_j>."""
        return self.cxx + self.cyy + self.czz


@dataclass(frozen=True, eq=False)
class BlochForm:
    """rho = I/4 + sum x_i s_i(x)I + sum y_i I(x)s_i + sum R_ij s_i(x)s_j."""

    x: np.ndarray
    y: np.ndarray
    R: np.ndarray

    def to_matrix(self):
        rho = np.kron(I2, I2) / 4
        for a, sa in enumerate(PAULI):
            rho = rho + self.x[a] * np.kron(sa, I2) + self.y[a] * np.kron(I2, sa)
            for b, sb in enumerate(PAULI):
                rho = rho + self.R[a, b] * np.kron(sa, sb)
        return rho


def as_matrix(rdm):
    return np.asarray(getattr(rdm, "matrix", rdm))


def two_site_rdm(level, sites):
    """Reduced state of sites (i, j) for the equal-weight mixture over ``level``'s eigenspace.

    ``level`` may also be a bare (2**N,) or (2**N, G) array of orthonormal vectors.
    The complement is summed by bit gathering; no full density matrix is formed.
    """
    V = np.asarray(getattr(level, "eigenvectors", level))
    if V.ndim == 1:
        V = V[:, None]
    n = int(round(np.log2(V.shape[0])))
    if 1 << n != V.shape[0]:
        raise ArgumentError("vector length is not a power of two")
    i, j = sites
    if not (0 <= i < n and 0 <= j < n) or i == j:
        raise ArgumentError(f"invalid site pair {sites} for {n} sites")
    idx = np.arange(1 << n)
    pair = 2 * ((idx >> i) & 1) + ((idx >> j) & 1)
    rest = np.zeros_like(idx)
    k = 0
    for site in range(n):
        if site not in (i, j):
            rest |= ((idx >> site) & 1) << k
            k += 1
    M = np.zeros((1 << (n - 2), 4, V.shape[1]), dtype=V.dtype)
    M[rest, pair] = V
    # rho[p, q] = (1/G) sum_{c, v} psi_v[c, p] conj(psi_v[c, q])
    rho = np.einsum("cpv,cqv->pq", M, M.conj()) / V.shape[1]
    return TwoSiteRDM(rho, (i, j), n)


def extract_x_params(rdm, tol=X_TOL):
    """(a, b, w) of the symmetric X form diag corners a, central block [[b, w], [w, b]]."""
    rho = as_matrix(rdm)
    a = rho[0, 0].real
    b = rho[1, 1].real
    w = rho[1, 2].real
    model = np.array(
        [[a, 0, 0, 0], [0, b, w, 0], [0, w, b, 0], [0, 0, 0, a]], dtype=complex
    )
    dev = np.max(np.abs(rho - model))
    if dev > tol:
        raise StructureError(f"matrix deviates from the symmetric X form by {dev:.3g}")
    if abs(2 * a + 2 * b - 1) > tol:
        raise StructureError("X-form parameters violate 2a + 2b = 1")
    return float(a), float(b), float(w)


def x_state_params(rdm):
    """General X-state entries (a, b, c, d, g, w) read off the diagonal and anti-diagonal."""
    rho = as_matrix(rdm)
    return (rho[0, 0].real, rho[1, 1].real, rho[2, 2].real, rho[3, 3].real, rho[0, 3], rho[1, 2])


def correlators(rdm):
    rho = as_matrix(rdm)
    c = [float(np.trace(rho @ np.kron(s, s)).real) for s in PAULI]
    return CorrelatorSet(*c)


def bloch_form(rdm):
    rho = as_matrix(rdm)
    x = np.array([np.trace(rho @ np.kron(s, I2)).real for s in PAULI]) / 4
    y = np.array([np.trace(rho @ np.kron(I2, s)).real for s in PAULI]) / 4
    R = np.array([[np.trace(rho @ np.kron(sa, sb)).real for sb in PAULI] for sa in PAULI]) / 4
    return BlochForm(x, y, R)


def partial_trace(rdm, keep):
    """Single-qubit marginal of a two-qubit state; ``keep`` is 0 (site i) or 1 (site j)."""
    r = as_matrix(rdm).reshape(2, 2, 2, 2)
    return np.einsum("abcb->ac", r) if keep == 0 else np.einsum("abad->bd", r)


def bell_singlet():
    """|Psi-> = (|10> - |01>)/sqrt(2) as a density matrix."""
    psi = np.array([0, -1, 1, 0]) / np.sqrt(2)
    return np.outer(psi, psi).astype(complex)

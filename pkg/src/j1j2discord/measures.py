"""Quantum discord, its geometric measure, and related two-qubit quantities.

Entropies are in bits. Measurements are rank-1 projective and act on the first
qubit (site i of the pair).
"""
from dataclasses import dataclass

import numpy as np
from scipy.optimize import minimize

from .errors import ArgumentError
from .reduced_state import I2, PAULI, BlochForm, as_matrix, bloch_form, extract_x_params, partial_trace

NEG_EIG_TOL = 1e-10


@dataclass(frozen=True)
class MeasurementBasis:
    """Projectors E+- = (I +- n.sigma)/2 along the Bloch direction (theta, phi)."""

    theta: float
    phi: float

    @property
    def direction(self):
        st = np.sin(self.theta)
        return np.array([st * np.cos(self.phi), st * np.sin(self.phi), np.cos(self.theta)])

    @property
    def projectors(self):
        ns = sum(c * s for c, s in zip(self.direction, PAULI))
        return (I2 + ns) / 2, (I2 - ns) / 2


@dataclass(frozen=True)
class DiscordResult:
    discord: float
    classical_correlation: float
    mutual_information: float
    optimal_basis: MeasurementBasis


def _xlog2x(p):
    p = np.asarray(p, dtype=float)
    out = np.zeros_like(p)
    pos = p > 0
    out[pos] = p[pos] * np.log2(p[pos])
    return out


def von_neumann_entropy(rho):
    lam = np.linalg.eigvalsh(as_matrix(rho))
    if lam.min() < -NEG_EIG_TOL:
        raise ArgumentError(f"density matrix has a negative eigenvalue {lam.min():.3g}")
    return float(-_xlog2x(np.clip(lam, 0.0, None)).sum())


def mutual_information(rdm):
    rho = as_matrix(rdm)
    return (
        von_neumann_entropy(partial_trace(rho, 0))
        + von_neumann_entropy(partial_trace(rho, 1))
        - von_neumann_entropy(rho)
    )


def _conditional_info(rho, directions):
    """S(rho_B) - sum_k p_k S(rho_B|k) for each row of ``directions`` (unit 3-vectors)."""
    r = rho.reshape(2, 2, 2, 2)
    rho_b = np.einsum("abad->bd", r)
    # gamma[a] = Tr_A[(sigma_a (x) I) rho]
    gamma = np.array([np.einsum("ca,abcd->bd", s, r) for s in PAULI])
    ng = np.tensordot(directions, gamma, axes=(1, 0))
    total = 0.0
    for sign in (1.0, -1.0):
        m = (rho_b + sign * ng) / 2
        t = (m[:, 0, 0] + m[:, 1, 1]).real
        disc = np.sqrt(((m[:, 0, 0] - m[:, 1, 1]).real) ** 2 + 4 * np.abs(m[:, 0, 1]) ** 2)
        lam = np.clip(np.stack([(t + disc) / 2, (t - disc) / 2]), 0.0, None)
        # p S(m/p) = -sum lam log2 lam + p log2 p
        total = total + (-_xlog2x(lam).sum(axis=0) + _xlog2x(t))
    return von_neumann_entropy(rho_b) - total


def _angles_to_dirs(theta, phi):
    st = np.sin(theta)
    return np.stack([st * np.cos(phi), st * np.sin(phi), np.cos(theta)], axis=-1)


def classical_correlation(rdm, grid=(64, 128), refine_tol=1e-9, n_starts=4):
    """Classical correlation with measurement on the first qubit.

    Exhaustive (theta, phi) grid, then Nelder-Mead from the best few grid
    points. Returns (value, MeasurementBasis).
    """
    rho = as_matrix(rdm)
    if np.isscalar(grid):
        grid = (int(grid), 2 * int(grid))
    th = np.linspace(0.0, np.pi, grid[0])
    ph = np.linspace(0.0, 2 * np.pi, grid[1], endpoint=False)
    T, P = np.meshgrid(th, ph, indexing="ij")
    vals = _conditional_info(rho, _angles_to_dirs(T.ravel(), P.ravel()))
    best = np.argsort(vals)[::-1][:n_starts]
    best_val, best_x = vals[best[0]], (T.ravel()[best[0]], P.ravel()[best[0]])
    if vals.max() - vals.min() <= refine_tol:
        # flat landscape (e.g. SU(2)-symmetric states): every basis is optimal
        return float(max(best_val, 0.0)), MeasurementBasis(float(best_x[0]), float(best_x[1]))

    def neg(x):
        return -_conditional_info(rho, _angles_to_dirs(np.array([x[0]]), np.array([x[1]])))[0]

    for b in best:
        x0 = np.array([T.ravel()[b], P.ravel()[b]])
        res = minimize(neg, x0, method="Nelder-Mead",
                       options={"xatol": 1e-7, "fatol": refine_tol, "initial_simplex": x0 + np.array([[0, 0], [0.05, 0], [0, 0.05]])})
        if -res.fun > best_val:
            best_val, best_x = -res.fun, tuple(res.x)
    theta = float(np.mod(best_x[0], 2 * np.pi))
    phi = float(best_x[1])
    if theta > np.pi:
        theta, phi = 2 * np.pi - theta, phi + np.pi
    return float(max(best_val, 0.0)), MeasurementBasis(theta, float(np.mod(phi, 2 * np.pi)))


def quantum_discord(rdm, grid=(64, 128), refine_tol=1e-9, literal=False):
    """D = I - C with the first qubit as the measured apparatus.

    ``literal=True`` returns :func:`discord_symmetric_literal` on the state's
    symmetric X-form parameters instead (comparison only; classical correlation
    and basis are then undefined).
    """
    mi = mutual_information(rdm)
    if literal:
        return DiscordResult(discord_symmetric_literal(*extract_x_params(rdm)), np.nan, mi, None)
    cc, basis = classical_correlation(rdm, grid, refine_tol)
    cc = min(cc, mi)
    return DiscordResult(max(mi - cc, 0.0), cc, mi, basis)


def gmqd_general(b):
    """Geometric discord from the singular values of (x, R) in expectation-value units.

    Accepts a :class:`BlochForm` (coefficient convention, rescaled by 4 here) or a
    density matrix.
    """
    if not isinstance(b, BlochForm):
        b = bloch_form(b)
    rprime = 4.0 * np.column_stack([b.x, b.R])
    mu2 = np.clip(np.linalg.eigvalsh(rprime @ rprime.T), 0.0, None)
    return float((mu2.sum() - mu2.max()) / 4)


def gmqd_xstate(a, b, c, d, g, w, tol=1e-12):
    """Geometric discord of an X state from its six entries."""
    if abs(a + b + c + d - 1) > tol or b * c < abs(w) ** 2 - tol or a * d < abs(g) ** 2 - tol:
        raise ArgumentError("X-state entries violate normalisation or positivity")
    mu1 = 4 * (abs(g) + abs(w)) ** 2
    mu2 = 4 * (abs(g) - abs(w)) ** 2
    mu3 = 2 * ((a - c) ** 2 + (b - d) ** 2)
    return float((mu1 + mu2 + mu3 - max(mu1, mu3)) / 4)


def gmqd_symmetric(c):
    """Geometric discord of an SU(2)-symmetric pair from its per-component correlator."""
    if abs(c) > 1 + 1e-12:
        raise ArgumentError(f"correlator {c} outside [-1, 1]")
    return 0.5 * c * c


def linear_entropy(rdm):
    rho = as_matrix(rdm)
    return float(1.0 - np.trace(rho @ rho).real)


def discord_symmetric_literal(a, b, w):
    """A widely quoted closed form for the discord of the symmetric X state.

    Defective: it returns -1 for I/4 and -2 for the singlet. Kept only so the
    comparison can be reproduced; use :func:`quantum_discord` instead.
    ``w log2 w`` is evaluated on |w|.
    """
    w2 = 4 * w * w
    return float(
        -2 * (a + b) * np.log2(a + b)
        + 2 * _xlog2x(a)
        + 2 * _xlog2x(b)
        + 2 * _xlog2x(abs(w))
        - 0.5 * (_xlog2x(1 + w2) + _xlog2x(1 - w2))
    )

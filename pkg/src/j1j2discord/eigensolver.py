"""Low-lying spectrum of the ring: dense and Lanczos sector solvers plus level assembly."""
from dataclasses import dataclass

import numpy as np

from .basis import enumerate_sector
from .errors import ArgumentError, NumericalError
from .hamiltonian import SectorOperator, apply_h, build_dense, nnn_operator

DENSE_CUTOFF = 1024
DEGENERACY_TOL = 1e-9
SLOPE_TOL = 1e-6


def dense_eigh(m, sym_tol=1e-10):
    """Full eigendecomposition of a real symmetric matrix, eigenvalues ascending."""
    m = np.asarray(m, dtype=float)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise ArgumentError(f"expected a square matrix, got shape {m.shape}")
    if m.size and np.max(np.abs(m - m.T)) > sym_tol:
        raise ArgumentError("matrix is not symmetric")
    try:
        return np.linalg.eigh(m)
    except np.linalg.LinAlgError as exc:
        raise NumericalError(f"dense eigensolver did not converge: {exc}") from exc


def _lanczos_run(apply, start, locked, steps, want, tol):
    """One Lanczos pass with full reorthogonalisation against ``locked`` and the Krylov basis.

    Returns Ritz values/vectors of the lowest ``want`` pairs and their residual estimates.
    """
    dim = start.shape[0]
    steps = max(1, min(steps, dim - locked.shape[1]))
    Q = np.zeros((dim, steps))
    alpha = np.zeros(steps)
    beta = np.zeros(steps)
    q = start
    m = steps
    for j in range(steps):
        Q[:, j] = q
        w = apply(q)
        alpha[j] = q @ w
        w = w - alpha[j] * q - (beta[j - 1] * Q[:, j - 1] if j else 0.0)
        for _ in range(2):
            if locked.shape[1]:
                w -= locked @ (locked.T @ w)
            w -= Q[:, : j + 1] @ (Q[:, : j + 1].T @ w)
        beta[j] = np.linalg.norm(w)
        m = j + 1
        if beta[j] < 1e-12 * max(1.0, abs(alpha[j])):
            beta[j] = 0.0
            break
        if j + 1 >= want and (j + 1) % 10 == 0:
            theta, s = np.linalg.eigh(_tridiag(alpha[:m], beta[: m - 1]))
            est = np.abs(beta[j] * s[-1, :want])
            if np.all(est <= 0.01 * tol * np.maximum(1.0, np.abs(theta[:want]))):
                break
        q = w / beta[j]
    theta, s = np.linalg.eigh(_tridiag(alpha[:m], beta[: m - 1]))
    want = min(want, m)
    vecs = Q[:, :m] @ s[:, :want]
    return theta[:want], vecs


def _tridiag(a, b):
    return np.diag(a) + np.diag(b, 1) + np.diag(b, -1)


def lanczos_lowest(apply, dim, k, tol=1e-10, seed=0, krylov_dim=None, max_passes=None):
    """The ``k`` lowest eigenpairs of a symmetric operator given as ``apply(v) -> A v``.

    Each pass builds a fully reorthogonalised Krylov space in the complement of
    the already converged (locked) vectors, locks the converged low end and
    restarts from the sum of the unconverged wanted Ritz vectors plus a little
    noise; the Krylov dimension grows when a pass locks nothing. Once ``k``
    pairs are locked, a pass from a pure random vector checks that no lower
    eigenvalue (for instance a further copy of a degenerate one) was skipped.

    Residuals satisfy ``||A v - lam v|| <= tol * max(1, |lam|)``.
    """
    if not 1 <= k <= dim:
        raise ArgumentError(f"need 1 <= k <= dim, got k={k}, dim={dim}")
    rng = np.random.default_rng(seed)
    steps = krylov_dim or min(dim, max(80, 3 * k + 20))
    max_steps = max(steps, min(dim, 600))
    max_passes = max_passes or 10 * k + 30
    locked = np.zeros((dim, 0))
    locked_vals = []
    best_res = None
    carry = None

    def orth_start(extra=None):
        v = rng.standard_normal(dim)
        v /= np.linalg.norm(v)
        if extra is not None:
            v = extra + 1e-3 * v
        for _ in range(2):
            v -= locked @ (locked.T @ v)
        nv = np.linalg.norm(v)
        return v / nv if nv > 1e-300 else None

    for _ in range(max_passes):
        if locked.shape[1] == dim:
            break
        start = orth_start(carry)
        if start is None:
            break
        need = max(1, k - locked.shape[1])
        theta, Y = _lanczos_run(apply, start, locked, steps, need, tol)
        R = np.column_stack([apply(Y[:, i]) for i in range(Y.shape[1])]) - Y * theta
        res = np.linalg.norm(R, axis=0)
        ok = res <= tol * np.maximum(1.0, np.abs(theta))
        best_res = res
        if locked.shape[1] >= k:
            top = max(locked_vals)
            if ok[0] and theta[0] >= top - tol * max(1.0, abs(top)):
                break
            if not ok[0]:
                carry = Y[:, 0]
                steps = min(max_steps, int(steps * 1.5))
                continue
        nlock = 0
        while nlock < len(ok) and ok[nlock]:
            nlock += 1
        if nlock:
            new = Y[:, :nlock]
            for _ in range(2):
                new = new - locked @ (locked.T @ new)
            new, _r = np.linalg.qr(new)
            locked = np.column_stack([locked, new])
            locked_vals.extend(theta[:nlock])
        else:
            steps = min(max_steps, int(steps * 1.5))
        rest = Y[:, nlock:]
        # a pure random start for the verification pass, otherwise keep the progress made
        carry = rest.sum(axis=1) / np.sqrt(max(rest.shape[1], 1)) if rest.shape[1] and locked.shape[1] < k else None
    else:
        raise NumericalError("Lanczos iteration budget exhausted", residuals=best_res)
    if locked.shape[1] < k:
        raise NumericalError(f"Lanczos converged only {locked.shape[1]} of {k} pairs", residuals=best_res)
    # Rayleigh-Ritz on the locked space tidies ordering and orthogonality
    AL = np.column_stack([apply(locked[:, i]) for i in range(locked.shape[1])])
    vals, s = np.linalg.eigh(locked.T @ AL)
    vecs = locked @ s
    return vals[:k], vecs[:, :k]


@dataclass(frozen=True, eq=False)
class SpectrumLevel:
    """One distinct energy with an orthonormal basis of its eigenspace.

    ``eigenvectors`` has shape (2**N, G) in the bitmask basis. ``branches`` is
    the number of distinct J2-slopes inside the eigenspace: 1 for a symmetry
    multiplet, >1 when separate levels cross exactly here.
    """

    energy: float
    degeneracy: int
    eigenvectors: np.ndarray
    sector_tags: tuple
    branches: int = 1
    slopes: tuple = ()

    @property
    def total_spin(self):
        """Largest |Sz| present; equals S when the level is a single spin multiplet."""
        n = int(np.log2(self.eigenvectors.shape[0]))
        return max(abs(n / 2 - t) for t in self.sector_tags)


@dataclass(frozen=True, eq=False)
class LowSpectrum:
    levels: tuple
    degeneracy_tol: float

    def __len__(self):
        return len(self.levels)

    def __getitem__(self, i):
        return self.levels[i]

    @property
    def energies(self):
        return np.array([lv.energy for lv in self.levels])

    def slot(self, index):
        """Level holding branch ``index`` (0 = ground state, 1 = first excited state, ...).

        A level where two branches cross exactly fills two consecutive slots,
        so at a ground-state crossing both slot 0 and slot 1 return it.
        """
        k = 0
        for lv in self.levels:
            k += lv.branches
            if index < k:
                return lv
        raise IndexError(f"slot {index} beyond the {k} computed branches")


def _seed(spec, n_up, seed):
    j2_bits = int(np.float64(spec.j2).view(np.uint64))
    ss = np.random.SeedSequence([spec.n_sites, j2_bits & 0xFFFFFFFF, j2_bits >> 32, n_up, seed])
    return int(ss.generate_state(1)[0])


def _sector_pairs(op, k, dense_cutoff, dense_cap, tol, seed):
    if op.dim <= min(dense_cutoff, dense_cap):
        vals, vecs = dense_eigh(build_dense(op, dense_cap))
        return vals[:k], vecs[:, :k]
    return lanczos_lowest(lambda v: op.sparse @ v, op.dim, min(k, op.dim), tol=tol, seed=seed)


def _group(values, tol):
    groups = []
    for i, e in enumerate(values):
        if groups and e - values[groups[-1][-1]] <= tol * max(1.0, abs(e)):
            groups[-1].append(i)
        else:
            groups.append([i])
    return groups


def assemble_low_spectrum(
    spec,
    n_levels=3,
    degeneracy_tol=DEGENERACY_TOL,
    k_per_sector=None,
    dense_cutoff=DENSE_CUTOFF,
    dense_cap=4096,
    lanczos_tol=1e-10,
    seed=0,
):
    """Lowest ``n_levels`` distinct levels, merged over every Sz sector.

    The Sz = 0 sector (half filling) holds every SU(2) multiplet, so it fixes the
    energy window; each other sector then needs at most as many pairs as the
    Sz = 0 sector has inside that window. Sectors with ``n_up > N/2`` are
    obtained from their spin-flipped partners.
    """
    if n_levels < 1:
        raise ArgumentError("n_levels must be >= 1")
    n = spec.n_sites
    half = n // 2
    k0 = k_per_sector or n_levels * (n + 1)

    op0 = SectorOperator(spec, enumerate_sector(n, half))
    while True:
        k0 = min(k0, op0.dim)
        vals0, vecs0 = _sector_pairs(op0, k0, dense_cutoff, dense_cap, lanczos_tol, _seed(spec, half, seed))
        groups = _group(vals0, degeneracy_tol)
        complete = len(groups) > n_levels or k0 == op0.dim
        if complete:
            break
        k0 *= 2
    cut_group = groups[min(n_levels, len(groups)) - 1]
    cutoff = vals0[cut_group[-1]]
    window = cutoff + degeneracy_tol * max(1.0, abs(cutoff))
    k_side = int(np.count_nonzero(vals0 <= window))

    full_dim = 1 << n
    flip = full_dim - 1
    energies, columns, tags, ops = [], [], [], {}

    def add(n_up, basis, vals, vecs):
        keep = vals <= window
        for e, v in zip(vals[keep], vecs[:, keep].T):
            col = np.zeros(full_dim)
            col[basis.states] = v
            energies.append(e)
            columns.append(col)
            tags.append(n_up)

    add(half, op0.basis, vals0, vecs0)
    ops[half] = op0
    for n_up in range(half - 1, -1, -1):
        op = SectorOperator(spec, enumerate_sector(n, n_up))
        ops[n_up] = op
        k = min(k_side, op.dim)
        vals, vecs = _sector_pairs(op, k, dense_cutoff, dense_cap, lanczos_tol, _seed(spec, n_up, seed))
        if vals[0] > window:
            continue
        add(n_up, op.basis, vals, vecs)
        partner = enumerate_sector(n, n - n_up)
        perm = op.basis.lookup(partner.states ^ flip)
        add(n - n_up, partner, vals, vecs[perm])

    order = np.argsort(energies, kind="stable")
    energies = np.asarray(energies)[order]
    columns = np.column_stack(columns)[:, order]
    tags = [tags[i] for i in order]

    levels = []
    for grp in _group(energies, degeneracy_tol)[:n_levels]:
        V, _r = np.linalg.qr(columns[:, grp])
        V *= np.sign(np.diag(_r))
        slopes = _branch_slopes(spec, V, [tags[i] for i in grp], ops)
        levels.append(
            SpectrumLevel(
                energy=float(np.mean(energies[grp])),
                degeneracy=len(grp),
                eigenvectors=V,
                sector_tags=tuple(tags[i] for i in grp),
                branches=len(_group(slopes, SLOPE_TOL)),
                slopes=tuple(slopes),
            )
        )
    return LowSpectrum(tuple(levels), degeneracy_tol)


def _branch_slopes(spec, V, tags, ops):
    """Eigenvalues of dH/dJ2 projected on the eigenspace (degenerate perturbation theory).

    dH/dJ2 conserves Sz, so the projection is assembled sector by sector.
    """
    n = spec.n_sites
    W = np.zeros((V.shape[1], V.shape[1]))
    for n_up in sorted(set(tags)):
        basis = ops[min(n_up, n - n_up)].basis if n_up <= n // 2 else enumerate_sector(n, n_up)
        dop = nnn_operator(spec, basis)
        block = V[basis.states]
        W += block.T @ apply_h(dop, block)
    W = 0.5 * (W + W.T)
    return np.sort(np.linalg.eigvalsh(W))

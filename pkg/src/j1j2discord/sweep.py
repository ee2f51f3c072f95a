"""J2 sweeps, Feynman-Hellmann correlators, crossing detection and the 4/6-site reference forms."""
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .basis import ChainSpec, enumerate_sector
from .eigensolver import DEGENERACY_TOL, _group, assemble_low_spectrum, dense_eigh, lanczos_lowest
from .errors import ArgumentError, DomainError, NumericalError
from .frustration import exe_direct, frustration_lower_bound, frustration_measure, total_frustration
from .hamiltonian import SectorOperator, build_dense
from .measures import gmqd_general, linear_entropy, quantum_discord
from .reduced_state import correlators, two_site_rdm

FD_STEP = 1e-4
OBSERVABLES = ("c", "dg", "qd", "sl", "f", "e1", "total_f", "exe")
LEVEL_NAMES = ("gs", "es1", "es2", "es3")


@dataclass
class SweepRow:
    j2: float
    level: str
    energy: float
    degeneracy: int
    c_nn: float = np.nan
    c_nnn: float = np.nan
    dg_nn: float = np.nan
    dg_nnn: float = np.nan
    qd_nn: float = np.nan
    qd_nnn: float = np.nan
    sl_nn: float = np.nan
    f_nn: float = np.nan
    f_nnn: float = np.nan
    e1_nn: float = np.nan
    e1_nnn: float = np.nan
    total_f: float = np.nan
    exe: float = np.nan
    flags: list = field(default_factory=list)
    # Feynman-Hellmann correlators, NaN where suppressed near a kink
    fh_c_nn: float = np.nan
    fh_c_nnn: float = np.nan
    branches: int = 1


@dataclass
class SweepTable:
    n_sites: int
    j2: np.ndarray
    n_levels: int
    rows: list
    levels: dict = field(repr=False, default_factory=dict)
    solver: dict = field(default_factory=dict)
    fd_step: float = FD_STEP
    errors: list = field(default_factory=list)

    def column(self, name, level="gs"):
        return np.array([getattr(r, name) for r in self.rows if r.level == level])

    def level_rows(self, level="gs"):
        return [r for r in self.rows if r.level == level]


@dataclass(frozen=True)
class CrossingReport:
    kind: str
    j2_location: float
    resolution: float
    level: str
    magnitude: float


def _distinct_energies(spec, count, degeneracy_tol=DEGENERACY_TOL):
    """Lowest ``count`` distinct energies from the Sz = 0 sector alone (it contains every multiplet)."""
    op = SectorOperator(spec, enumerate_sector(spec.n_sites, spec.n_sites // 2))
    if op.dim <= 4096:
        vals = np.linalg.eigvalsh(build_dense(op))
    else:
        vals, _ = lanczos_lowest(lambda v: op.sparse @ v, op.dim, min(op.dim, 4 * count + 8))
    groups = _group(vals, degeneracy_tol)
    return np.array([vals[g].mean() for g in groups[:count]])


def feynman_hellmann_correlators(e_minus, e_center, e_plus, j2, h, kinks=(), j1=1.0):
    """<sigma_i . sigma_j> for NN and NNN pairs from energies per site at j2-h, j2, j2+h."""
    for k in kinks:
        if abs(j2 - k) <= 2 * h:
            raise DomainError(f"stencil at j2={j2} lies within 2h of a kink at {k}")
    slope = (e_plus - e_minus) / (2 * h)
    return 4.0 / j1 * (e_center - j2 * slope), 4.0 * slope


def _evaluate_point(args):
    n_sites, j2, n_levels, observables, solver, fd_step, discord_grid, exe_grid = args
    spec = ChainSpec(n_sites, float(j2))
    try:
        spectrum = assemble_low_spectrum(spec, n_levels=n_levels, **solver)
        fd = None
        if fd_step:
            fd = [
                _distinct_energies(spec.with_j2(j2 - fd_step), n_levels, solver.get("degeneracy_tol", DEGENERACY_TOL)),
                _distinct_energies(spec.with_j2(j2 + fd_step), n_levels, solver.get("degeneracy_tol", DEGENERACY_TOL)),
            ]
    except NumericalError as exc:
        raise NumericalError(f"solver failed at j2={j2}: {exc}", getattr(exc, "residuals", None)) from exc
    rows, levels = [], {}
    for s in range(n_levels):
        lv = spectrum.slot(s)
        levels[s] = lv
        rows.append(_observables(spec, lv, s, observables, fd, fd_step, discord_grid, exe_grid))
    return rows, levels


def _evaluate_point_safe(args):
    try:
        return _evaluate_point(args)
    except NumericalError as exc:
        return str(exc)


def _observables(spec, lv, slot, observables, fd, fd_step, discord_grid, exe_grid):
    n = spec.n_sites
    row = SweepRow(spec.j2, LEVEL_NAMES[slot], lv.energy, lv.degeneracy, branches=lv.branches)
    if lv.branches > 1:
        row.flags.append("crossing")
    if slot > 0:
        row.flags.append("excited")
    r_nn, r_nnn = two_site_rdm(lv, (0, 1)), two_site_rdm(lv, (0, 2))
    if "c" in observables:
        row.c_nn, row.c_nnn = correlators(r_nn).dot, correlators(r_nnn).dot
    if "dg" in observables:
        row.dg_nn, row.dg_nnn = gmqd_general(r_nn), gmqd_general(r_nnn)
    if "qd" in observables:
        row.qd_nn = quantum_discord(r_nn, discord_grid).discord
        row.qd_nnn = quantum_discord(r_nnn, discord_grid).discord
    if "sl" in observables:
        row.sl_nn = linear_entropy(r_nn)
    if "f" in observables or "total_f" in observables:
        row.f_nn, row.f_nnn = frustration_measure(r_nn), frustration_measure(r_nnn)
        if "total_f" in observables:
            row.total_f = total_frustration(row.f_nn, row.f_nnn)
    if "e1" in observables:
        row.e1_nn, row.e1_nnn = frustration_lower_bound(r_nn), frustration_lower_bound(r_nnn)
    if "exe" in observables:
        row.exe = exe_direct(lv, spec, 0, exe_grid)[0]
    if fd is not None and lv.branches == 1 and slot < len(fd[0]) and slot < len(fd[1]):
        row.fh_c_nn, row.fh_c_nnn = feynman_hellmann_correlators(
            fd[0][slot] / n, lv.energy / n, fd[1][slot] / n, spec.j2, fd_step
        )
    return row


def run_sweep(
    n_sites,
    j2_min=0.0,
    j2_max=1.0,
    steps=201,
    n_levels=2,
    observables=OBSERVABLES,
    threads=1,
    fd_step=FD_STEP,
    discord_grid=(64, 128),
    exe_grid=(48, 96),
    detect=True,
    on_error="raise",
    **solver,
):
    """Evaluate every observable on a uniform J2 grid for the lowest ``n_levels`` branches.

    Points are independent; with ``threads > 1`` they run in worker processes
    and are merged back in grid order, so the result does not depend on
    scheduling. Finite-difference correlators within 2h of a detected crossing
    are blanked and flagged ``fd_suppressed``. With ``on_error="collect"`` a
    failing point is skipped and recorded in ``table.errors`` instead of raising.
    """
    if steps < 2:
        raise ArgumentError("steps must be >= 2")
    if not 1 <= n_levels <= len(LEVEL_NAMES):
        raise ArgumentError(f"n_levels must be in [1, {len(LEVEL_NAMES)}]")
    unknown = set(observables) - set(OBSERVABLES)
    if unknown:
        raise ArgumentError(f"unknown observables {sorted(unknown)}")
    grid = np.linspace(j2_min, j2_max, steps)
    tasks = [(n_sites, float(j), n_levels, tuple(observables), solver, fd_step, discord_grid, exe_grid) for j in grid]
    worker = _evaluate_point if on_error == "raise" else _evaluate_point_safe
    if threads > 1:
        with ProcessPoolExecutor(max_workers=threads) as pool:
            results = list(pool.map(worker, tasks, chunksize=max(1, steps // (4 * threads))))
    else:
        results = [worker(t) for t in tasks]
    rows, levels, errors = [], {}, []
    for idx, res in enumerate(results):
        if isinstance(res, str):
            errors.append((float(grid[idx]), res))
            continue
        r, lv = res
        rows.extend(r)
        for s, level in lv.items():
            levels[idx, s] = level
    table = SweepTable(n_sites, grid, n_levels, rows, levels, dict(solver), fd_step, errors)
    if detect and steps >= 3 and not errors:
        suppress_near_crossings(table, detect_crossings(table))
    return table


def suppress_near_crossings(table, reports):
    h = table.fd_step
    for r in table.rows:
        slot = LEVEL_NAMES.index(r.level)
        relevant = [c.j2_location for c in reports if c.kind != "gmqd_jump" and LEVEL_NAMES.index(c.level) <= slot + 1]
        if r.branches > 1 or any(abs(r.j2 - k) <= 2 * h + 1e-12 for k in relevant):
            r.fh_c_nn = r.fh_c_nnn = np.nan
            if "fd_suppressed" not in r.flags:
                r.flags.append("fd_suppressed")


def _overlap(va, vb):
    """Fraction of the smaller subspace captured by the other one."""
    m = va.eigenvectors.T @ vb.eigenvectors
    return float(np.sum(m * m) / min(va.degeneracy, vb.degeneracy))


def _match(spectrum, ref):
    """Level of ``spectrum`` with the largest subspace overlap with ``ref``."""
    scores = [float(np.sum((lv.eigenvectors.T @ ref.eigenvectors) ** 2)) for lv in spectrum.levels]
    return spectrum.levels[int(np.argmax(scores))]


def _bisect_crossing(n_sites, lo, hi, left, right, n_levels, solver, tol=1e-7, max_iter=40):
    """Locate where the branch continuing ``left`` meets the one continuing ``right``."""
    def gap(x):
        sp = assemble_low_spectrum(ChainSpec(n_sites, x), n_levels=n_levels + 2, **solver)
        a, b = _match(sp, left), _match(sp, right)
        return a.energy - b.energy, a is b

    g_lo, same = gap(lo)
    if same:
        return lo
    for _ in range(max_iter):
        if hi - lo <= tol:
            break
        mid = 0.5 * (lo + hi)
        g, same = gap(mid)
        if same:
            return mid
        # the branch ordering on the left side tells which way the crossing lies
        if np.sign(g) == np.sign(g_lo):
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def _clusters(indices):
    out = []
    for i in indices:
        if out and i == out[-1][-1] + 1:
            out[-1].append(i)
        else:
            out.append([i])
    return out


def detect_crossings(table, kink_factor=10.0, kink_floor=1e-8, jump_factor=10.0, jump_floor=1e-6, window=5,
                     refine_tol=1e-7):
    """Ground-state kinks, excited-branch crossings and GMQD jumps along a sweep."""
    grid = table.j2
    dx = grid[1] - grid[0]
    solver = table.solver
    reports = []

    e0 = table.column("energy", "gs")
    d2 = e0[:-2] - 2 * e0[1:-1] + e0[2:]
    thr = max(kink_factor * np.median(np.abs(d2)), kink_floor)
    for cl in _clusters([i + 1 for i in np.flatnonzero(np.abs(d2) > thr)]):
        exact = [j for j in cl if table.levels[j, 0].branches > 1]
        if exact:
            loc, res = float(grid[exact[0]]), 0.0
        else:
            lo, hi = max(cl[0] - 1, 0), min(cl[-1] + 1, len(grid) - 1)
            loc = _bisect_crossing(table.n_sites, grid[lo], grid[hi], table.levels[lo, 0], table.levels[hi, 0],
                                   table.n_levels, solver, refine_tol)
            res = refine_tol
        reports.append(CrossingReport("gs_kink", float(loc), res, "gs", float(np.max(np.abs(d2[np.array(cl) - 1])) / dx)))

    for s in range(1, table.n_levels):
        name = LEVEL_NAMES[s]
        lv = [table.levels[j, s] for j in range(len(grid))]
        energies = np.array([v.energy for v in lv])
        exact = [j for j in range(len(grid)) if lv[j].branches > 1]
        for j in exact:
            reports.append(CrossingReport("es_crossing", float(grid[j]), 0.0, name, _slope_jump(energies, j, dx)))
        for j in range(len(grid) - 1):
            if j in exact or j + 1 in exact:
                continue
            if _overlap(lv[j], lv[j + 1]) < 0.5:
                loc = _bisect_crossing(table.n_sites, grid[j], grid[j + 1], lv[j], lv[j + 1], table.n_levels, solver, refine_tol)
                reports.append(CrossingReport("es_crossing", float(loc), refine_tol, name, _slope_jump(energies, j, dx, j + 1)))

    for s in range(table.n_levels):
        name = LEVEL_NAMES[s]
        dg = table.column("dg_nn", name)
        if np.all(np.isnan(dg)):
            continue
        diffs = np.abs(np.diff(dg))
        for cl in _clusters(list(np.flatnonzero(diffs > _local_threshold(diffs, jump_factor, jump_floor, window)))):
            loc = 0.5 * (grid[cl[0]] + grid[cl[-1] + 1])
            reports.append(CrossingReport("gmqd_jump", float(loc), float(dx / 2 * (len(cl) == 1)), name,
                                          float(abs(dg[cl[-1] + 1] - dg[cl[0]]) if len(cl) > 1 else diffs[cl[0]])))
    reports.sort(key=lambda r: (r.kind, LEVEL_NAMES.index(r.level), r.j2_location))
    return reports


def _local_threshold(diffs, factor, floor, window):
    """factor x median of the neighbouring |differences| (the point itself excluded), at least ``floor``.

    A whole-sweep median collapses to zero when a plateau covers half the grid,
    so the scale is taken locally.
    """
    thr = np.empty_like(diffs)
    for i in range(len(diffs)):
        nb = np.concatenate([diffs[max(0, i - window):i], diffs[i + 1:i + 1 + window]])
        thr[i] = max(factor * np.median(nb), floor) if len(nb) else floor
    return thr


def _slope_jump(energies, j, dx, k=None):
    """Difference of one-sided slopes around grid point j (or the interval j..k)."""
    k = j if k is None else k
    if j < 1 or k + 1 >= len(energies):
        return float("nan")
    return float(abs((energies[k + 1] - energies[k]) - (energies[j] - energies[j - 1])) / dx)


# --- closed forms for 4 and 6 sites ---------------------------------------------------------

def _omega(a, b, c):
    return (lambda j: np.sqrt(9 * j * j + a * j + c), lambda j: (18 * j + a) / (2 * np.sqrt(9 * j * j + a * j + c)))


_O13, _dO13 = _omega(-18, 0, 13)
_O5, _dO5 = _omega(-10, 0, 5)

# (lo, hi, energy, dE/dJ2, degeneracy) per branch of each level
_PIECES = {
    (4, "gs"): [(0.0, 0.5, lambda j: -2 + j, lambda j: 1.0, 1),
                (0.5, np.inf, lambda j: -3 * j, lambda j: -3.0, 1)],
    (4, "es1"): [(0.0, 0.25, lambda j: -1 + j, lambda j: 1.0, 3),
                 (0.25, 0.5, lambda j: -3 * j, lambda j: -3.0, 1),
                 (0.5, np.inf, lambda j: -2 + j, lambda j: 1.0, 1)],
    (6, "gs"): [(0.0, 0.5, lambda j: -0.5 * _O13(j) - 1, lambda j: -0.5 * _dO13(j), 1),
                (0.5, np.inf, lambda j: -1.5 * (1 + j), lambda j: -1.5, 1)],
    (6, "es1"): [(0.0, 0.25, lambda j: -0.5 * _O5(j) - 1, lambda j: -0.5 * _dO5(j), 3),
                 (0.25, 0.5, lambda j: -1.5 * (1 + j), lambda j: -1.5, 1),
                 (0.5, np.inf, lambda j: -0.5 * _O13(j) - 1, lambda j: -0.5 * _dO13(j), 1)],
}


def analytic_reference(n, level, j2, tol=1e-12):
    """(energy, NN geometric discord) from the 4- and 6-site closed-form spectra.

    The discord follows from the energy branch through the Feynman-Hellmann
    correlator. At a point where two branches meet, the value is that of the
    degeneracy-weighted equal mixture, matching the sweep convention.
    """
    if (n, level) not in _PIECES:
        raise ArgumentError(f"no closed form for n={n}, level={level!r}")
    if j2 < 0:
        raise ArgumentError("closed forms cover j2 >= 0 only")
    active = [p for p in _PIECES[n, level] if p[0] - tol <= j2 <= p[1] + tol]
    energy = active[0][2](j2)
    weight = sum(p[4] for p in active)
    # <sigma.sigma>_NN = 4 (e - j2 de/dj2) per branch, e = E/n
    c_dot = sum(p[4] * 4 * (p[2](j2) - j2 * p[3](j2)) / n for p in active) / weight
    return float(energy), float((c_dot / 3) ** 2 / 2)


def crossing_points(n, level):
    """Interior branch boundaries of the closed forms."""
    return [p[1] for p in _PIECES[n, level] if np.isfinite(p[1])]


def six_site_gs_gmqd_misfactored(j2):
    """Variant of the 6-site j2 < 0.5 ground-state NN discord with the factor 2 on the wrong term.

    Circulates in the literature; disagrees with ED. The correct value is
    :func:`analytic_reference`.
    """
    om = _O13(j2)
    return (1 / 162) * ((18 * j2 - 26) / om - 1) ** 2


def analytic_frustration(n, j2):
    """Ground-state (f_nn, f_nnn, e1_nn, e1_nnn) for 4 or 6 sites, away from the j2 = 0.5 crossing."""
    if abs(j2 - 0.5) < 1e-12:
        raise DomainError("ground state is degenerate at j2 = 0.5")
    below = j2 < 0.5
    if n == 4:
        return (0.25, 1.0, 0.25, 2 / 3) if below else (0.75, 0.0, 0.75, 0.0)
    if n == 6:
        if not below:
            return (0.5, 0.5, 0.5, 0.5)
        om = float(_O13(j2))
        f_nn = (9 * j2 - 13 + 7 * om) / (12 * om)
        return (f_nn, 3 * (om - j2 + 1) / (4 * om), f_nn, (3 * om + j2 - 1) / (4 * om))
    raise ArgumentError(f"no closed form for n={n}")

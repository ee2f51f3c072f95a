import numpy as np
import pytest

from j1j2discord import ArgumentError, DomainError, NumericalError, analytic_reference, detect_crossings, run_sweep
from j1j2discord import sweep as sweep_module
from j1j2discord.sweep import analytic_frustration, crossing_points, feynman_hellmann_correlators, six_site_gs_gmqd_misfactored

FAST = ("c", "dg", "f", "e1")


@pytest.fixture(scope="module")
def four_site():
    return run_sweep(4, 0, 1, 101, n_levels=2, observables=FAST)


@pytest.fixture(scope="module")
def six_site():
    return run_sweep(6, 0, 1, 101, n_levels=2, observables=FAST)


def test_four_site_gmqd_plateaus(four_site):
    for r in four_site.level_rows("gs"):
        if r.j2 < 0.5:
            assert r.dg_nn == pytest.approx(2 / 9, abs=1e-12)
        elif r.j2 > 0.5:
            assert r.dg_nn == pytest.approx(0, abs=1e-12)
    for r in four_site.level_rows("es1"):
        if r.j2 < 0.25:
            assert r.dg_nn == pytest.approx(1 / 18, abs=1e-12)
        elif 0.25 < r.j2 < 0.5:
            assert r.dg_nn == pytest.approx(0, abs=1e-12)
        elif 0.5 < r.j2 < 1:
            assert r.dg_nn == pytest.approx(2 / 9, abs=1e-12)


def test_six_site_energy_at_zero(six_site):
    assert six_site.level_rows("gs")[0].energy == pytest.approx(-2.8027756, abs=1e-7)


@pytest.mark.parametrize("n", [4, 6])
def test_rows_match_closed_forms(n, four_site, six_site):
    table = four_site if n == 4 else six_site
    for level in ("gs", "es1"):
        known = crossing_points(n, level)
        for r in table.level_rows(level):
            energy, dg = analytic_reference(n, level, r.j2)
            assert r.energy == pytest.approx(energy, abs=1e-9)
            if r.branches == 1 or any(abs(r.j2 - k) < 1e-12 for k in known):
                assert r.dg_nn == pytest.approx(dg, abs=1e-9)


def test_six_site_frustration_closed_forms(six_site):
    for r in six_site.level_rows("gs"):
        if r.branches == 1:
            got = (r.f_nn, r.f_nnn, r.e1_nn, r.e1_nnn)
            np.testing.assert_allclose(got, analytic_frustration(6, r.j2), atol=1e-9)


def test_misfactored_variant_disagrees(six_site):
    gs0 = six_site.level_rows("gs")[0]
    assert six_site_gs_gmqd_misfactored(0.0) == pytest.approx(0.41619, abs=1e-5)
    assert gs0.dg_nn == pytest.approx(0.19396, abs=1e-5)


@pytest.mark.parametrize("args, expected", [
    ((4, "gs", 0.3), (-1.7, 2 / 9)),
    ((6, "gs", 0.7), (-2.55, 1 / 18)),
])
def test_analytic_reference_examples(args, expected):
    assert analytic_reference(*args) == pytest.approx(expected, abs=1e-12)


def test_analytic_reference_six_site_excited():
    assert analytic_reference(6, "es1", 0.1)[0] == pytest.approx(-2.0111874, abs=1e-7)


def test_analytic_reference_errors():
    with pytest.raises(ArgumentError):
        analytic_reference(8, "gs", 0.3)
    with pytest.raises(ArgumentError):
        analytic_reference(4, "gs", -0.1)


def test_feynman_hellmann_examples():
    h = 1e-4

    def e4(j):
        return (-2 + j) / 4 if j <= 0.5 else -3 * j / 4

    c_nn, c_nnn = feynman_hellmann_correlators(e4(0.2 - h), e4(0.2), e4(0.2 + h), 0.2, h)
    assert (c_nn, c_nnn) == pytest.approx((-2, 1), abs=1e-10)
    c_nn, _ = feynman_hellmann_correlators(e4(0.8 - h), e4(0.8), e4(0.8 + h), 0.8, h)
    assert c_nn == pytest.approx(0, abs=1e-10)
    # affine input: slope recovered exactly
    _, c_nnn = feynman_hellmann_correlators(0.5 - 0.25, 0.5, 0.5 + 0.25, 0.0, 1.0)
    assert c_nnn == 4 * 0.25


def test_feynman_hellmann_kink_guard():
    with pytest.raises(DomainError):
        feynman_hellmann_correlators(0, 0, 0, 0.5001, 1e-4, kinks=[0.5])


@pytest.mark.parametrize("n", [4, 6, 8])
def test_feynman_hellmann_vs_partial_trace(n):
    table = run_sweep(n, 0, 1, 41, n_levels=2, observables=("c",))
    checked = 0
    for r in table.rows:
        if "fd_suppressed" in r.flags:
            assert np.isnan(r.fh_c_nn)
            continue
        assert r.fh_c_nn == pytest.approx(r.c_nn, abs=1e-5)
        assert r.fh_c_nnn == pytest.approx(r.c_nnn, abs=1e-5)
        checked += 1
    assert checked > 60


def test_crossings_four_site(four_site):
    reports = detect_crossings(four_site)
    kinks = [r for r in reports if r.kind == "gs_kink"]
    assert len(kinks) == 1 and kinks[0].j2_location == pytest.approx(0.5, abs=0.005)
    es = sorted(r.j2_location for r in reports if r.kind == "es_crossing")
    assert any(abs(x - 0.25) < 1e-6 for x in es)
    assert any(abs(x - 0.5) < 1e-6 for x in es)
    jumps = [r for r in reports if r.kind == "gmqd_jump" and r.level == "gs"]
    assert any(abs(j.j2_location - kinks[0].j2_location) <= 0.01 for j in jumps)
    for r in reports:
        assert 0 <= r.j2_location <= 1


def test_crossings_six_site(six_site):
    kinks = [r for r in detect_crossings(six_site) if r.kind == "gs_kink"]
    assert kinks[0].j2_location == pytest.approx(0.5, abs=0.005)


def test_off_grid_crossing_is_bisected():
    # grid spacing 0.03 misses 0.25 / 0.5 so the locations come from refinement
    table = run_sweep(6, 0.003, 0.963, 33, n_levels=2, observables=("dg",))
    es = [r for r in detect_crossings(table) if r.kind == "es_crossing"]
    assert any(abs(r.j2_location - 0.25) < 1e-6 and r.resolution > 0 for r in es)
    # here the two branches also swap order, so the bisection must read the side correctly
    assert any(abs(r.j2_location - 0.5) < 1e-6 and r.resolution > 0 for r in es)
    assert len(es) == 2
    kinks = [r for r in detect_crossings(table) if r.kind == "gs_kink"]
    assert kinks[0].j2_location == pytest.approx(0.5, abs=1e-6)


def test_suppression_near_kink(four_site):
    for r in four_site.rows:
        if abs(r.j2 - 0.5) < 1e-12:
            assert "fd_suppressed" in r.flags and "crossing" in r.flags
    assert all("excited" in r.flags for r in four_site.level_rows("es1"))


def test_determinism_and_parallel_merge():
    a = run_sweep(6, 0, 1, 21, n_levels=2, observables=FAST)
    b = run_sweep(6, 0, 1, 21, n_levels=2, observables=FAST, threads=2)
    fields = ("j2", "energy", "c_nn", "dg_nn", "f_nnn", "fh_c_nn")
    assert [tuple(getattr(r, f) for f in fields) for r in a.rows] == pytest.approx(
        [tuple(getattr(r, f) for f in fields) for r in b.rows], nan_ok=True, rel=0, abs=0)
    assert [r.flags for r in a.rows] == [r.flags for r in b.rows]


def test_sweep_argument_errors():
    with pytest.raises(ArgumentError):
        run_sweep(4, steps=1)
    with pytest.raises(ArgumentError):
        run_sweep(4, n_levels=5)
    with pytest.raises(ArgumentError):
        run_sweep(4, observables=("bogus",))


def test_point_failures(monkeypatch):
    real = sweep_module.assemble_low_spectrum

    def flaky(spec, **kw):
        if abs(spec.j2 - 0.5) < 1e-12:
            raise NumericalError("forced")
        return real(spec, **kw)

    monkeypatch.setattr(sweep_module, "assemble_low_spectrum", flaky)
    table = run_sweep(4, 0, 1, 5, observables=("dg",), on_error="collect")
    assert [j for j, _ in table.errors] == [0.5]
    assert "j2=0.5" in table.errors[0][1]
    assert len(table.rows) == 8
    with pytest.raises(NumericalError, match="j2=0.5"):
        run_sweep(4, 0, 1, 5, observables=("dg",))

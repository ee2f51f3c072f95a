import numpy as np
import pytest
from hypothesis import given, strategies as st

from j1j2discord import (
    ArgumentError,
    ChainSpec,
    correlators,
    exe_closed,
    exe_direct,
    frustration_lower_bound,
    frustration_measure,
    frustration_report,
    gmqd_from_frustration,
    gmqd_symmetric,
    linear_entropy,
    total_frustration,
    two_site_rdm,
)
from j1j2discord.frustration import frustration_from_correlator, lower_bound_from_correlator
from j1j2discord.reduced_state import bell_singlet

from conftest import spectrum

GRID = np.linspace(0, 1, 21)


def test_exe_closed_examples():
    assert exe_closed(0) == 0
    assert exe_closed(-0.5) == pytest.approx(4 / 3)
    e6 = (-0.5 * np.sqrt(13) - 1) / 6
    assert e6 == pytest.approx(-0.4671293, abs=1e-7)
    assert exe_closed(e6) == pytest.approx(1.2456781, abs=1e-7)


@pytest.mark.parametrize("site", [0, 1, 2, 3])
def test_exe_direct_four_site_flat(site):
    lo, values = exe_direct(spectrum(4, 0.0)[0], ChainSpec(4, 0.0), site)
    assert lo == pytest.approx(4 / 3, abs=1e-9)
    assert values.max() - values.min() <= 1e-9


def test_exe_direct_six_site_excited():
    lv = spectrum(6, 0.4)[1]
    lo, values = exe_direct(lv, ChainSpec(6, 0.4))
    assert lo == pytest.approx(exe_closed(lv.energy / 6), abs=1e-9)
    assert values.max() - values.min() <= 1e-9


def test_exe_site_invariance():
    lv, spec = spectrum(8, 0.3)[0], ChainSpec(8, 0.3)
    assert exe_direct(lv, spec, 0)[0] == pytest.approx(exe_direct(lv, spec, 3)[0], abs=1e-10)
    with pytest.raises(ArgumentError):
        exe_direct(lv, spec, 8)


def test_frustration_examples():
    assert frustration_measure(bell_singlet()) == pytest.approx(0, abs=1e-15)
    gs = spectrum(4, 0.2)[0]
    assert frustration_measure(two_site_rdm(gs, (0, 1))) == pytest.approx(0.25, abs=1e-12)
    assert frustration_measure(two_site_rdm(gs, (0, 2))) == pytest.approx(1.0, abs=1e-12)


def test_lower_bound_examples():
    assert frustration_lower_bound(bell_singlet()) == pytest.approx(0, abs=1e-12)
    assert frustration_lower_bound(two_site_rdm(spectrum(4, 0.2)[0], (0, 2))) == pytest.approx(2 / 3, abs=1e-12)
    assert frustration_lower_bound(two_site_rdm(spectrum(6, 0.7)[0], (0, 1))) == pytest.approx(0.5, abs=1e-12)


@pytest.mark.parametrize("d", [0, 5])
def test_lower_bound_rank_range(d):
    with pytest.raises(ArgumentError):
        frustration_lower_bound(np.eye(4) / 4, d)


def test_total_and_gmqd_relations():
    assert total_frustration(0, 0) == 0
    assert total_frustration(0.25, 1.0) == pytest.approx(5 / 8)
    assert total_frustration(0.75, 0.75) == pytest.approx(0.75)
    assert gmqd_from_frustration(0.75) == 0
    assert gmqd_from_frustration(0) == pytest.approx(0.5)
    assert gmqd_from_frustration(0.25) == pytest.approx(2 / 9)


@given(st.floats(-1, 1))
def test_correlator_forms_are_consistent(c):
    # isotropic state with component correlator c
    rho = (np.eye(4) + c * sum(np.kron(s, s) for s in (np.array([[0, 1], [1, 0]]), np.array([[0, -1j], [1j, 0]]), np.diag([1, -1])))) / 4
    assert frustration_measure(rho) == pytest.approx(frustration_from_correlator(c), abs=1e-12)
    assert frustration_lower_bound(rho) == pytest.approx(lower_bound_from_correlator(c), abs=1e-12)
    assert gmqd_from_frustration(frustration_from_correlator(c)) == pytest.approx(gmqd_symmetric(c), abs=1e-12)


@pytest.mark.parametrize("n", [4, 6, 8, 10])
def test_frustration_invariants_over_grid(n):
    for j2 in GRID:
        sp = spectrum(n, float(j2))
        for lv in sp:
            for pair in ((0, 1), (0, 2)):
                rdm = two_site_rdm(lv, pair)
                f = frustration_measure(rdm)
                c = correlators(rdm).c_scalar
                assert f >= frustration_lower_bound(rdm) - 1e-10
                assert f == pytest.approx(frustration_from_correlator(c), abs=1e-10)
                assert gmqd_from_frustration(f) == pytest.approx(gmqd_symmetric(c), abs=1e-10)
        gs = sp[0]
        if gs.branches > 1:
            continue
        nn, nnn = two_site_rdm(gs, (0, 1)), two_site_rdm(gs, (0, 2))
        assert frustration_measure(nn) == pytest.approx(frustration_lower_bound(nn), abs=1e-9)
        gap = frustration_measure(nnn) - frustration_lower_bound(nnn)
        if j2 < 0.5:
            assert gap > 1e-6
        else:
            assert gap <= 1e-9
        if gs.degeneracy == 1:
            f = frustration_measure(nn)
            assert linear_entropy(nn) == pytest.approx(0.75 - 4 / 3 * (f - 0.75) ** 2, abs=1e-9)


def test_report():
    spec = ChainSpec(6, 0.3)
    r = frustration_report(spectrum(6, 0.3)[0], spec)
    assert r.total_f == pytest.approx((r.f_nn + r.f_nnn) / 2, abs=1e-12)
    assert not r.geometric_frustration_nn
    assert r.geometric_frustration_nnn
    assert r.exe == pytest.approx(exe_closed(spectrum(6, 0.3)[0].energy / 6), abs=1e-9)
    assert r.label == "frustration"
    excited = frustration_report(spectrum(6, 0.3)[1], spec, excited=True)
    assert excited.label == "overlap deficit"

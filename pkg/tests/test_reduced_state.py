import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from j1j2discord import ArgumentError, StructureError, bloch_form, correlators, two_site_rdm
from j1j2discord.measures import gmqd_symmetric
from j1j2discord.reduced_state import BlochForm, bell_singlet, extract_x_params, partial_trace, x_state_params

from conftest import spectrum


def test_four_site_ground_state_x_params():
    rdm = two_site_rdm(spectrum(4, 0.0)[0], (0, 1))
    a, b, w = extract_x_params(rdm)
    assert (a, b, w) == pytest.approx((1 / 12, 5 / 12, -1 / 3), abs=1e-12)
    assert rdm.pair_kind == "NN"


def test_maximally_mixed_and_singlet_params():
    assert extract_x_params(np.eye(4) / 4) == pytest.approx((0.25, 0.25, 0.0))
    assert extract_x_params(bell_singlet()) == pytest.approx((0.0, 0.5, -0.5))


def test_non_x_state_rejected():
    plus = np.full(4, 0.5)
    with pytest.raises(StructureError):
        extract_x_params(np.outer(plus, plus))


def test_correlator_examples():
    c = correlators(bell_singlet())
    assert (c.cxx, c.cyy, c.czz) == pytest.approx((-1, -1, -1))
    c = correlators(two_site_rdm(spectrum(4, 0.0)[0], (0, 1)))
    assert (c.cxx, c.cyy, c.czz) == pytest.approx((-2 / 3,) * 3, abs=1e-12)
    assert c.dot == pytest.approx(-2, abs=1e-12)
    product = np.zeros((4, 4))
    product[0, 0] = 1
    c = correlators(product)
    assert (c.cxx, c.cyy, c.czz) == pytest.approx((0, 0, 1))


def test_bloch_examples():
    b = bloch_form(np.eye(4) / 4)
    assert np.allclose(b.x, 0) and np.allclose(b.y, 0) and np.allclose(b.R, 0)
    b = bloch_form(bell_singlet())
    np.testing.assert_allclose(b.R, -np.eye(3) / 4, atol=1e-15)
    b = bloch_form(two_site_rdm(spectrum(4, 0.0)[0], (0, 1)))
    np.testing.assert_allclose(b.R, -2 / 3 * np.eye(3) / 4, atol=1e-12)
    np.testing.assert_allclose(b.x, 0, atol=1e-12)
    np.testing.assert_allclose(b.y, 0, atol=1e-12)


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 2**31))
def test_bloch_round_trip(seed):
    rng = np.random.default_rng(seed)
    a = rng.standard_normal((4, 4)) + 1j * rng.standard_normal((4, 4))
    rho = a @ a.conj().T
    rho /= np.trace(rho)
    np.testing.assert_allclose(bloch_form(rho).to_matrix(), rho, atol=1e-12)


def test_six_site_dimer_phase_correlator():
    c = correlators(two_site_rdm(spectrum(6, 0.6)[0], (0, 1))).c_scalar
    assert abs(c) == pytest.approx(1 / 3, abs=1e-10)
    assert gmqd_symmetric(c) == pytest.approx(1 / 18, abs=1e-10)


@pytest.mark.parametrize("n, j2", [(4, 0.2), (6, 0.35), (8, 0.5), (10, 0.244), (10, 0.8)])
def test_mixture_invariants(n, j2):
    for lv in spectrum(n, j2)[:2]:
        nn = [two_site_rdm(lv, (i, (i + 1) % n)).matrix for i in range(n)]
        nnn = [two_site_rdm(lv, (i, (i + 2) % n)).matrix for i in range(n)]
        for group in (nn, nnn):
            for m in group[1:]:
                np.testing.assert_allclose(m, group[0], atol=1e-10)
        for rho in (nn[0], nnn[0]):
            np.testing.assert_allclose(partial_trace(rho, 0), np.eye(2) / 2, atol=1e-10)
            np.testing.assert_allclose(partial_trace(rho, 1), np.eye(2) / 2, atol=1e-10)
            purity = np.trace(rho @ rho).real
            assert 0.25 - 1e-12 <= purity <= 1 + 1e-12
            c = correlators(rho)
            assert max(abs(c.cxx - c.cyy), abs(c.cyy - c.czz), abs(c.cxx - c.czz)) <= 1e-10
            assert np.trace(rho).real == pytest.approx(1, abs=1e-12)
            np.testing.assert_allclose(rho, rho.conj().T, atol=1e-14)


def test_partial_trace_against_full_density_matrix():
    rng = np.random.default_rng(4)
    psi = rng.standard_normal(64) + 1j * rng.standard_normal(64)
    psi /= np.linalg.norm(psi)
    rho = two_site_rdm(psi, (1, 4)).matrix
    # full-tensor reference: axis k of the reshaped state is bit 5 - k, so keep e (bit 1) then b (bit 4)
    t = psi.reshape([2] * 6)
    ref = np.einsum("abcdef,aBcdEf->ebEB", t, t.conj()).reshape(4, 4)
    np.testing.assert_allclose(rho, ref, atol=1e-14)


def test_x_state_params_and_pair_kind():
    lv = spectrum(8, 0.3)[0]
    assert two_site_rdm(lv, (0, 2)).pair_kind == "NNN"
    assert two_site_rdm(lv, (0, 4)).pair_kind == "far"
    assert two_site_rdm(lv, (7, 0)).pair_kind == "NN"
    a, b, c, d, g, w = x_state_params(two_site_rdm(lv, (0, 1)))
    assert a == pytest.approx(d) and b == pytest.approx(c) and abs(g) < 1e-12


@pytest.mark.parametrize("sites", [(0, 0), (0, 4), (-1, 2)])
def test_bad_site_pairs(sites):
    with pytest.raises(ArgumentError):
        two_site_rdm(np.ones(16) / 4, sites)


def test_bloch_matrix_types():
    b = BlochForm(np.zeros(3), np.zeros(3), -np.eye(3) / 4)
    np.testing.assert_allclose(b.to_matrix(), bell_singlet(), atol=1e-15)

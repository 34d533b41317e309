import math

import mpmath as mp
import numpy as np
import pytest
from hypothesis import given, strategies as st

from impurity_thermo import BosonicBO, DrudeBath
from impurity_thermo.errors import AtDiscontinuity, Unstable

GRID = np.linspace(-6, 6, 2401)
GRID_NOJUMP = GRID[np.abs(np.abs(GRID) - 1.0) > 1e-12]


def test_chi_ss_at_zero(bose):
    assert bose.chi_ss(0.0) == pytest.approx(1 / 0.6 + 0j, abs=1e-15)


def test_chi_ss_uncoupled_is_bare_pole():
    sys = BosonicBO(1.0, DrudeBath(0.0, 4.0))
    w = np.array([0.0, 0.5, 2.0])
    np.testing.assert_allclose(sys.chi_ss(w), 1 / (1 - w ** 2), rtol=1e-15)


def test_response_parity(bose):
    for f in (bose.chi_ss, bose.chi_sb):
        v, m = f(GRID), f(-GRID)
        np.testing.assert_allclose(v.real, m.real, atol=1e-13)
        np.testing.assert_allclose(v.imag, -m.imag, atol=1e-13)


def test_chi_sb_examples(bose):
    assert bose.chi_sb(0.0) == pytest.approx(-2 / 3, abs=1e-15)
    assert bose.chi_sb(1.7, 0.0) == 0
    np.testing.assert_allclose(bose.chi_sb(GRID, 1.0) + bose.bath.phi_tilde(GRID) * bose.chi_ss(GRID),
                               0, atol=1e-14)


def test_closed_forms_against_mpmath(bose, oracle):
    for w in (-5.0, -1.3, 0.0, 0.4, 0.999, 1.001, 2.5, 30.0):
        for lam2 in (0.25, 1.0):
            assert complex(oracle.bose_chi_ss(mp.mpf(w), lam2)) == pytest.approx(
                complex(bose.chi_ss(w, lam2)), rel=1e-13)
            assert complex(oracle.bose_chi_sb(mp.mpf(w), lam2)) == pytest.approx(
                complex(bose.chi_sb(w, lam2)), rel=1e-13)
        assert bose.varphi(w) == pytest.approx(float(oracle.bose_phi(w)), abs=1e-14)
        assert bose.vartheta(w) == pytest.approx(float(oracle.bose_theta(w)), rel=1e-13, abs=1e-300)


def test_vartheta_anchor_values(bose):
    assert bose.vartheta(0.0) == pytest.approx(0.5 * math.log(5 / 3), abs=1e-15)
    assert bose.vartheta(0.0) == pytest.approx(0.255413, abs=1e-6)
    assert bose.vartheta(4.0) == pytest.approx(0.5 * math.log(17 / 16.8), abs=1e-15)


def test_vartheta_tail_law(bose):
    v = 1e3
    assert v ** 3 * bose.vartheta(v) == pytest.approx(0.4 * 4 / 2, rel=1e-2)


def test_vartheta_large_argument_keeps_precision(bose, oracle):
    for v in (1e2, 1e4, 1e6):
        assert bose.vartheta(v) == pytest.approx(float(oracle.bose_theta(v)), rel=1e-12)


def test_varphi_zero_and_parity(bose):
    assert bose.varphi(0.0) == 0.0
    np.testing.assert_array_equal(bose.varphi(GRID_NOJUMP), -bose.varphi(-GRID_NOJUMP))


def test_varphi_scalar_matches_array(bose):
    w = GRID_NOJUMP[::37]
    np.testing.assert_allclose([bose.varphi(float(x)) for x in w], bose.varphi(w), atol=1e-15)


def test_jump(bose):
    below, above = bose.varphi_sided(-1), bose.varphi_sided(1)
    assert below == pytest.approx(-0.5 * math.atan(0.25) + math.pi / 2, abs=1e-14)
    assert below == pytest.approx(1.44831, abs=1e-5)
    assert above == pytest.approx(-0.12249, abs=1e-5)
    assert below - above == pytest.approx(math.pi / 2, abs=1e-9)
    assert bose.varphi(1 - 1e-9) == pytest.approx(below, abs=1e-7)
    assert bose.varphi(1 + 1e-9) == pytest.approx(above, abs=1e-7)
    with pytest.raises(AtDiscontinuity):
        bose.varphi(1.0)
    with pytest.raises(AtDiscontinuity):
        bose.varphi(np.array([0.0, -1.0]))


def test_uncoupled_spectra_vanish():
    sys = BosonicBO(1.0, DrudeBath(0.0, 4.0))
    assert np.all(sys.varphi(GRID) == 0)
    assert np.all(sys.vartheta(np.abs(GRID)) == 0)
    assert np.all(sys.chi_sb(GRID) == 0)


@pytest.mark.parametrize("eta", [1.0, 1.5])
def test_stability_is_strict(eta):
    with pytest.raises(Unstable):
        BosonicBO(1.0, DrudeBath(eta, 4.0))


def test_lambda2_range(bose):
    with pytest.raises(ValueError):
        bose.chi_sb(0.3, 1.5)


@given(st.floats(0.05, 3.0), st.floats(0.0, 0.95), st.floats(0.5, 20.0))
def test_vartheta_even_and_finite(ws, frac, gamma):
    sys = BosonicBO(ws, DrudeBath(frac * ws, gamma))
    v = np.array([0.0, 0.3, 2.0, 50.0])
    t = sys.vartheta(v)
    assert np.all(np.isfinite(t))
    np.testing.assert_array_equal(t, sys.vartheta(-v))

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from scipy import integrate

from impurity_thermo import BosonicBO, DrudeBath, FermionicBO, LambdaGrid, MatrixFn, QMeanTrace
from impurity_thermo import entangle as en
from impurity_thermo.errors import AsymmetricGrid, GridMismatch, NonRealResult, ShapeMismatch
from impurity_thermo.statfun import Statistics

SYM = np.linspace(-6, 6, 2401)
LAPLACE = np.linspace(0, 50, 501)


def _rand_fn(rng, n, d, grid=None):
    grid = np.arange(n, dtype=float) if grid is None else grid
    vals = rng.normal(size=(n, d, d)) + 1j * rng.normal(size=(n, d, d))
    return MatrixFn(grid, vals)


def _naive_matmul(a, b):
    d = a.shape[0]
    out = np.zeros((d, d), dtype=complex)
    for i in range(d):
        for j in range(d):
            for k in range(d):
                out[i, j] += a[i, k] * b[k, j]
    return out


# -- data types ---------------------------------------------------------------

def test_matrix_fn_validation():
    with pytest.raises(ValueError):
        MatrixFn(np.array([0.0, 0.0]), np.zeros((2, 1, 1)))
    with pytest.raises((ValueError, ShapeMismatch)):
        MatrixFn(np.array([0.0, 1.0]), np.zeros((2, 2, 3)))
    fn = MatrixFn.scalar([0.0, 1.0], [1.0, 2.0])
    assert fn.dim == 1 and len(fn) == 2


def test_lambda_grid_invariants():
    lg = LambdaGrid.gauss_legendre(20)
    assert abs(sum(lg.weights) - 1.0) < 1e-14
    assert np.all((lg.nodes > 0) & (lg.nodes < 1))
    with pytest.raises(ValueError):
        LambdaGrid(np.array([0.0, 0.5]), np.array([0.5, 0.5]))
    with pytest.raises(ValueError):
        LambdaGrid(np.array([0.2, 0.5]), np.array([0.5, 0.4]))


# -- per-point theorems ---------------------------------------------------------

def test_gbb_examples():
    g = MatrixFn.scalar([0.0], [0.2])
    assert en.gbb_from_local(g, MatrixFn.scalar([0.0], [1j])).values[0, 0, 0] == pytest.approx(0.2 - 0.04j)
    zero = MatrixFn.scalar([0.0], [0.0])
    assert en.gbb_from_local(g, zero).values[0, 0, 0] == 0.2


def test_gbb_matrix_against_naive_loops():
    rng = np.random.default_rng(7)
    g, gss = _rand_fn(rng, 5, 2), _rand_fn(rng, 5, 2)
    out = en.gbb_from_local(g, gss)
    for n in range(5):
        ref = g.values[n] - _naive_matmul(_naive_matmul(g.values[n], gss.values[n]), g.values[n])
        np.testing.assert_allclose(out.values[n], ref, atol=1e-14)


def test_shape_and_grid_mismatch():
    rng = np.random.default_rng(1)
    with pytest.raises(ShapeMismatch):
        en.gsb_trace(_rand_fn(rng, 4, 2), _rand_fn(rng, 4, 3))
    with pytest.raises(GridMismatch):
        en.gsb_trace(_rand_fn(rng, 4, 1), _rand_fn(rng, 4, 1, grid=np.arange(4) + 0.5))


def test_trace_cyclicity():
    rng = np.random.default_rng(3)
    g, gss = _rand_fn(rng, 6, 3), _rand_fn(rng, 6, 3)
    sb, bs = en.gsb_matrices(g, gss)
    np.testing.assert_allclose(np.trace(sb.values, axis1=1, axis2=2),
                               np.trace(bs.values, axis1=1, axis2=2), atol=1e-13)
    csb, cbs = en.chi_sb_matrices(g, gss)
    np.testing.assert_allclose(np.trace(csb.values, axis1=1, axis2=2),
                               np.trace(cbs.values, axis1=1, axis2=2), atol=1e-13)
    np.testing.assert_allclose(en.gsb_trace(g, gss),
                               np.trace(sb.values, axis1=1, axis2=2)
                               + np.trace(bs.values, axis1=1, axis2=2),
                               atol=1e-13)


def test_zero_bath_gives_zero():
    rng = np.random.default_rng(5)
    gss = _rand_fn(rng, 4, 2)
    zero = MatrixFn(gss.grid, np.zeros_like(gss.values))
    assert np.all(en.gsb_trace(zero, gss) == 0)
    assert np.all(en.chi_sb_trace(zero, gss) == 0)


def test_scalar_traces_reproduce_closed_forms(bose, fermi):
    grid = SYM[np.abs(np.abs(SYM) - 1) > 1e-12]
    g_f = fermi.bath_fn(grid)
    np.testing.assert_allclose(en.gsb_trace(g_f, MatrixFn.scalar(grid, fermi.g_ss(grid))),
                               fermi.g_sb(grid), atol=1e-12, rtol=0)
    phi = bose.bath_fn(grid)
    np.testing.assert_allclose(en.chi_sb_trace(phi, MatrixFn.scalar(grid, bose.chi_ss(grid))),
                               bose.chi_sb(grid), atol=1e-12, rtol=0)


def test_lambda2_scaling(fermi):
    grid = np.linspace(-3, 3, 61)
    lam2 = 0.37
    scaled = fermi.bath_fn(grid).scaled(lam2)
    local = MatrixFn.scalar(grid, fermi.g_ss(grid, lam2))
    np.testing.assert_allclose(en.gsb_trace(scaled, local), fermi.g_sb(grid, lam2), atol=1e-12)


@settings(max_examples=25, deadline=None)
@given(st.integers(0, 10_000))
def test_traces_invariant_under_unitary_rotation(seed):
    rng = np.random.default_rng(seed)
    g, gss = _rand_fn(rng, 3, 2), _rand_fn(rng, 3, 2)
    q, _ = np.linalg.qr(rng.normal(size=(2, 2)) + 1j * rng.normal(size=(2, 2)))
    rot = lambda f: MatrixFn(f.grid, q @ f.values @ q.conj().T)  # noqa: E731
    np.testing.assert_allclose(en.gsb_trace(rot(g), rot(gss)), en.gsb_trace(g, gss), atol=1e-12)


# -- lambda quadratures -----------------------------------------------------------

@pytest.mark.parametrize("which", ["bose", "fermi"])
def test_vartheta_quadrature_matches_closed_form(which, bose, fermi):
    sys = bose if which == "bose" else fermi
    lg = LambdaGrid.gauss_legendre(20)
    got = en.vartheta_by_lambda_quadrature(
        sys.provider().statistics, sys.bath_fn(LAPLACE, True), sys.local_family(LAPLACE, lg, True), lg)
    np.testing.assert_allclose(got, sys.vartheta(LAPLACE), atol=1e-10, rtol=0)
    lg40 = LambdaGrid.gauss_legendre(40)
    got40 = en.vartheta_by_lambda_quadrature(
        sys.provider().statistics, sys.bath_fn(LAPLACE, True), sys.local_family(LAPLACE, lg40, True), lg40)
    assert np.max(np.abs(got40 - got)) < 1e-10


@pytest.mark.parametrize("which", ["bose", "fermi"])
@pytest.mark.parametrize("nodes,gap", [(20, 0.25), (80, 0.1)])
def test_varphi_quadrature_matches_closed_form(which, nodes, gap, bose, fermi):
    """The lambda integrand peaks sharply near omega_s as lambda -> 0, so the
    1e-8 agreement holds at a node-dependent distance from the jump."""
    sys = bose if which == "bose" else fermi
    lg = LambdaGrid.gauss_legendre(nodes)
    got = en.varphi_by_lambda_quadrature(sys.provider().statistics, sys.bath_fn(SYM),
                                         sys.local_family(SYM, lg), lg)
    assert np.max(np.abs(got + got[::-1])) < 1e-12
    away = np.abs(np.abs(SYM) - 1.0) >= gap
    np.testing.assert_allclose(got[away], sys.varphi(SYM[away]), atol=1e-8, rtol=0)


def test_zero_coupling_family_gives_zero():
    lg = LambdaGrid.gauss_legendre(8)
    sys = FermionicBO(-1.0, DrudeBath(0.0, 4.0))
    v = en.vartheta_by_lambda_quadrature(Statistics.FERMI, sys.bath_fn(LAPLACE, True),
                                         sys.local_family(LAPLACE, lg, True), lg)
    assert np.all(v == 0)
    grid = np.linspace(-3, 3, 7) + 0.05 * np.array([-1, -1, -1, 0, 1, 1, 1])
    p = en.varphi_by_lambda_quadrature(Statistics.FERMI, sys.bath_fn(grid), sys.local_family(grid, lg), lg)
    assert np.all(p == 0)


def test_quadrature_errors(bose):
    lg = LambdaGrid.gauss_legendre(5)
    grid = np.linspace(-1.5, 3.0, 10)
    with pytest.raises(AsymmetricGrid):
        en.varphi_by_lambda_quadrature(Statistics.BOSE, bose.bath_fn(grid), bose.local_family(grid, lg), lg)
    with pytest.raises(GridMismatch):
        en.vartheta_by_lambda_quadrature(Statistics.BOSE, bose.bath_fn(LAPLACE, True),
                                         bose.local_family(LAPLACE, lg, True)[:3], lg)
    fake = [MatrixFn.scalar(LAPLACE, np.full(LAPLACE.size, 1j)) for _ in range(5)]
    with pytest.raises(NonRealResult):
        en.vartheta_by_lambda_quadrature(Statistics.BOSE, bose.bath_fn(LAPLACE, True), fake, lg)


def test_diagonal_two_level_decouples(bose):
    """A diagonal 2x2 system is the sum of its scalar channels."""
    other = BosonicBO(2.0, DrudeBath(0.7, 3.0))
    lg = LambdaGrid.gauss_legendre(20)
    v = LAPLACE

    def diag(a, b):
        vals = np.zeros((v.size, 2, 2), dtype=complex)
        vals[:, 0, 0], vals[:, 1, 1] = a, b
        return MatrixFn(v, vals)

    bath = diag(bose.bath.phi_tilde_laplace(v), other.bath.phi_tilde_laplace(v))
    fam = [diag(bose.chi_ss_laplace(v, x), other.chi_ss_laplace(v, x)) for x in lg.nodes]
    got = en.vartheta_by_lambda_quadrature(Statistics.BOSE, bath, fam, lg)
    np.testing.assert_allclose(got, bose.vartheta(v) + other.vartheta(v), atol=1e-10)


# -- nonentanglement part ------------------------------------------------------------

def test_f_mean_from_q():
    assert np.all(en.f_mean_from_q([[0.4]], [0.0]) == 0)
    assert en.f_mean_from_q(0.4, 1.0)[0] == pytest.approx(-0.4)
    eta = np.array([[0.4, 0.1], [0.1, 0.3]])
    q = np.array([1.5, -2.0])
    ref = [-sum(eta[u, v] * q[v] for v in range(2)) for u in range(2)]
    np.testing.assert_allclose(en.f_mean_from_q(eta, q), ref, atol=1e-15)
    with pytest.raises(ShapeMismatch):
        en.f_mean_from_q(eta, [1.0])


def test_a_nen_examples():
    lg = LambdaGrid.gauss_legendre(20)
    zeros = [QMeanTrace(x, np.zeros(1)) for x in lg.nodes]
    assert en.a_nen([[0.4]], zeros, lg) == 0
    ones = [QMeanTrace(x, np.ones(1)) for x in lg.nodes]
    assert en.a_nen([[0.4]], ones, lg) == pytest.approx(-0.2, abs=1e-14)
    root = [QMeanTrace(x, np.array([np.sqrt(x)])) for x in lg.nodes]
    half = integrate.quad(lambda x: x, 0, 1)[0]
    assert en.a_nen([[0.4]], root, lg) == pytest.approx(-0.5 * 0.4 * half, abs=1e-14)
    with pytest.raises(GridMismatch):
        en.a_nen([[0.4]], ones[:-1], lg)
    with pytest.raises(GridMismatch):
        en.a_nen([[0.4]], [QMeanTrace(0.5, np.ones(1))] * 20, lg)


def test_a_nen_permutation_invariance():
    rng = np.random.default_rng(11)
    lg = LambdaGrid.gauss_legendre(6)
    a = rng.normal(size=(3, 3))
    eta = a + a.T
    means = [rng.normal(size=3) for _ in lg.nodes]
    perm = np.array([2, 0, 1])
    base = en.a_nen(eta, [QMeanTrace(x, m) for x, m in zip(lg.nodes, means)], lg)
    permuted = en.a_nen(eta[np.ix_(perm, perm)],
                        [QMeanTrace(x, m[perm]) for x, m in zip(lg.nodes, means)], lg)
    assert permuted == pytest.approx(base, rel=1e-13)

"""Shared fixtures and arbitrary-precision oracles.

The oracles restate the closed forms directly in mpmath at 40 digits, with
no code shared with the package, so agreement checks both the algebra and
the floating-point implementation.
"""
import mpmath as mp
import pytest

from impurity_thermo import BosonicBO, DrudeBath, FermionicBO

ETA, GAMMA, OMEGA_S, EPS_S = 0.4, 4.0, 1.0, -1.0

_ACCEPTANCE = pytest.StashKey[list]()


def pytest_configure(config):
    config.stash[_ACCEPTANCE] = []


@pytest.fixture
def acceptance_lines(request):
    """Collector for the one-line-per-criterion acceptance summary."""
    return request.config.stash[_ACCEPTANCE]


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    lines = config.stash.get(_ACCEPTANCE, [])
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in sorted(lines, key=lambda ln: int(ln.split()[1])):
            terminalreporter.write_line(line)


mp.mp.dps = 40


@pytest.fixture(scope="session")
def bose():
    return BosonicBO(OMEGA_S, DrudeBath(ETA, GAMMA))


@pytest.fixture(scope="session")
def fermi():
    return FermionicBO(EPS_S, DrudeBath(ETA, GAMMA))


@pytest.fixture(scope="session")
def bose_sp(bose):
    return bose.provider()


@pytest.fixture(scope="session")
def fermi_sp(fermi):
    return fermi.provider()


class MpOracle:
    """High-precision closed forms for the paper-parameter Drude models."""

    def __init__(self, eta=ETA, gamma=GAMMA, ws=OMEGA_S, eps=EPS_S):
        self.eta, self.gamma = mp.mpf(eta), mp.mpf(gamma)
        self.ws, self.eps = mp.mpf(ws), mp.mpf(eps)

    def drude(self, w):
        return 1j * self.eta * self.gamma / (w + 1j * self.gamma)

    def drude_laplace(self, v):
        return self.eta * self.gamma / (v + self.gamma)

    # bosonic
    def bose_theta(self, v):
        v = abs(mp.mpf(v))
        num = self.ws ** 2 + v ** 2
        return mp.log(abs(num / (num - self.ws * self.drude_laplace(v)))) / 2

    def bose_phi(self, w):
        w = mp.mpf(w)
        aw = abs(w)
        b = self.ws ** 2 - aw ** 2
        val = mp.arg(b / (b - self.ws * self.drude(aw))) / 2
        return mp.sign(w) * val

    def bose_chi_ss(self, w, lam2=1):
        return self.ws / (self.ws ** 2 - w ** 2 - lam2 * self.ws * self.drude(w))

    def bose_chi_sb(self, w, lam2=1):
        a = lam2 * self.ws * self.drude(w)
        return -a / (self.ws ** 2 - w ** 2 - a)

    # fermionic
    def fermi_theta(self, v):
        v = abs(mp.mpf(v))
        z = 1j * v - self.eps
        return mp.log(abs(z / (z + 1j * self.drude_laplace(v))))

    def _r(self, w):
        b = w - self.eps
        return b / (b + 1j * self.drude(w))

    def fermi_phi(self, w):
        w = mp.mpf(w)
        aw = abs(w)
        return mp.sign(w) * mp.arg(self._r(aw) / self._r(-aw)) / 2

    def fermi_g_ss(self, w, lam2=1):
        return 1j / (w - self.eps + 1j * lam2 * self.drude(w))

    def fermi_g_sb(self, w, lam2=1):
        return 2 * lam2 * self.drude(w) / (w - self.eps + 1j * lam2 * self.drude(w))

    # free energy by direct Matsubara summation
    def a_matsubara(self, stat, T):
        T = mp.mpf(T)
        h = 2 * mp.pi * T
        if stat == "bose":
            s = mp.nsum(lambda n: self.bose_theta(h * n), [1, mp.inf])
            return -T * self.bose_theta(0) - 2 * T * s
        s = mp.nsum(lambda n: self.fermi_theta(h * (n - mp.mpf(1) / 2)), [1, mp.inf])
        return 2 * T * s


@pytest.fixture(scope="session")
def oracle():
    return MpOracle()

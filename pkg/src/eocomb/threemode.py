"""
Two optical modes (anti-Stokes ``+``, Stokes ``-``) coupled through one
microwave mode.

Rates are in MHz (angular units); only ratios enter the closed forms.  The
microwave mode may see thermal noise from its waveguide (``n_ext``) and its
internal bath (``n_int``); optical thermal noise is neglected.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field

import numpy as np
from numpy.typing import NDArray
from scipy import constants

from .errors import DomainError, SingularSystemError, UnstableSystemError
from .gaussian import CovarianceMatrix
from .network import (
    NetworkScattering,
    OpticalPort,
    covariance_from_scattering as _network_covariance,
    output_occupations,
    solve_network,
)
from .spectral import fwhm

THRESHOLD_TOL = 1e-9
UNSTABLE_TOL = 1e-12

# Local reference phases (plus, minus, mw) that put the output correlations
# in real I/Z block form: Stokes quadratures referenced at pi, microwave at 3pi/2.
THREE_MODE_FRAME = (0.0, np.pi, 1.5 * np.pi)

MODES = ("plus", "minus", "mw")


@dataclass(frozen=True)
class ModeLoss:
    kappa_e: float
    kappa_i: float = 0.0

    def __post_init__(self):
        if self.kappa_e < 0 or self.kappa_i < 0:
            raise DomainError("loss rates must be nonnegative")
        if self.kappa_e + self.kappa_i <= 0:
            raise DomainError("total loss rate must be positive")

    @classmethod
    def from_total(cls, kappa: float, eta: float = 1.0) -> "ModeLoss":
        if not 0.0 <= eta <= 1.0:
            raise DomainError(f"eta must lie in [0, 1], got {eta}")
        return cls(kappa * eta, kappa * (1.0 - eta))

    @property
    def kappa(self) -> float:
        return self.kappa_e + self.kappa_i

    @property
    def eta(self) -> float:
        return self.kappa_e / self.kappa


@dataclass(frozen=True)
class MicrowaveNoise:
    n_ext: float = 0.0
    n_int: float = 0.0

    def __post_init__(self):
        if self.n_ext < 0 or self.n_int < 0:
            raise DomainError("thermal occupations must be nonnegative")

    def n_bar(self, loss: ModeLoss) -> float:
        """Effective occupation seen by the microwave mode."""
        return (loss.kappa_e * self.n_ext + loss.kappa_i * self.n_int) / loss.kappa


@dataclass(frozen=True)
class ThreeModeParams:
    loss_plus: ModeLoss
    loss_minus: ModeLoss
    loss_mw: ModeLoss
    c1: float
    c2: float
    noise: MicrowaveNoise = field(default_factory=MicrowaveNoise)

    def __post_init__(self):
        if self.c1 < 0 or self.c2 < 0:
            raise DomainError("cooperativities must be nonnegative")

    @classmethod
    def symmetric(cls, c1: float, c2: float, kappa: float = 1.0, eta: float = 1.0,
                  noise: MicrowaveNoise | None = None) -> "ThreeModeParams":
        loss = ModeLoss.from_total(kappa, eta)
        return cls(loss, loss, loss, c1, c2, noise or MicrowaveNoise())

    @classmethod
    def from_couplings(cls, loss_plus, loss_minus, loss_mw, g1: complex, g2: complex,
                       noise: MicrowaveNoise | None = None) -> "ThreeModeParams":
        """Build from pump-enhanced couplings G (MHz) via C = 4|G|^2 / (kappa_k kappa_mw)."""
        c1 = 4.0 * abs(g1) ** 2 / (loss_plus.kappa * loss_mw.kappa)
        c2 = 4.0 * abs(g2) ** 2 / (loss_minus.kappa * loss_mw.kappa)
        return cls(loss_plus, loss_minus, loss_mw, c1, c2, noise or MicrowaveNoise())

    @property
    def g1(self) -> float:
        return 0.5 * np.sqrt(self.c1 * self.loss_plus.kappa * self.loss_mw.kappa)

    @property
    def g2(self) -> float:
        return 0.5 * np.sqrt(self.c2 * self.loss_minus.kappa * self.loss_mw.kappa)

    @property
    def n_bar(self) -> float:
        return self.noise.n_bar(self.loss_mw)

    @property
    def margin(self) -> float:
        """1 + C1 - C2; positive below threshold."""
        return 1.0 + self.c1 - self.c2


@dataclass(frozen=True)
class ScatteringMatrix:
    """Coefficients mapping (e+, i+, e-^dag, i-^dag, eW, iW) to (a+, a-^dag, aW)."""

    omega: float
    coefficients: NDArray[np.complex128]

    OUT_CONJ = (False, True, False)
    IN_CONJ = (False, False, True, True, False, False)

    def as_network(self) -> NetworkScattering:
        return NetworkScattering(self.omega, np.asarray(self.coefficients), self.OUT_CONJ, self.IN_CONJ)


class Stability(enum.Enum):
    STABLE = "stable"
    AT_THRESHOLD = "at_threshold"
    UNSTABLE = "unstable"


def thermal_occupation(frequency: float, temperature: float) -> float:
    """Bose occupation for ``frequency`` in GHz (ordinary) at ``temperature`` in kelvin."""
    if temperature < 0:
        raise DomainError("temperature must be nonnegative")
    if frequency <= 0:
        raise DomainError("frequency must be positive")
    if temperature == 0:
        return 0.0
    x = constants.h * frequency * 1e9 / (constants.k * temperature)
    return float(1.0 / np.expm1(x))


def stability(params: ThreeModeParams) -> Stability:
    excess = params.c2 - (1.0 + params.c1)
    if abs(excess) <= THRESHOLD_TOL:
        return Stability.AT_THRESHOLD
    if excess >= UNSTABLE_TOL:
        return Stability.UNSTABLE
    return Stability.STABLE


def _require_stable(params: ThreeModeParams) -> None:
    state = stability(params)
    if state is not Stability.STABLE:
        raise UnstableSystemError(
            f"c2={params.c2:g} with c1={params.c1:g} is {state.value} (need c2 < 1 + c1)")


def _input_rates(params: ThreeModeParams) -> NDArray[np.float64]:
    p, m, w = params.loss_plus, params.loss_minus, params.loss_mw
    return np.array([p.kappa_e, p.kappa_i, m.kappa_e, m.kappa_i, w.kappa_e, w.kappa_i])


def scattering_matrix(params: ThreeModeParams, omega: float) -> ScatteringMatrix:
    """Closed-form T(omega) from the cofactors of the 3x3 Langevin system.

    All self-energies are Gamma_k = kappa_k/2 - i omega (the Stokes row is
    written for a_-^dag at the same Fourier component), so
    M = Gamma_+ Gamma_- Gamma_W + |G1|^2 Gamma_- - |G2|^2 Gamma_+.
    """
    _require_stable(params)
    gp = 0.5 * params.loss_plus.kappa - 1j * omega
    gm = 0.5 * params.loss_minus.kappa - 1j * omega
    gw = 0.5 * params.loss_mw.kappa - 1j * omega
    g1, g2 = params.g1, params.g2
    det = gp * gm * gw + g1 * g1 * gm - g2 * g2 * gp
    scale = 0.125 * params.loss_plus.kappa * params.loss_minus.kappa * params.loss_mw.kappa
    if abs(det) < 1e-14 * scale:
        raise SingularSystemError("Langevin determinant vanishes")

    cof = np.array([
        [gm * gw - g2 * g2, -g1 * g2, -1j * g1 * gm],
        [g1 * g2, gp * gw + g1 * g1, 1j * g2 * gp],
        [-1j * g1 * gm, -1j * g2 * gp, gp * gm],
    ]) / det

    rates = _input_rates(params)
    out_e = np.sqrt(rates[0::2])
    col = np.sqrt(rates)
    t = np.empty((3, 6), dtype=complex)
    for k in range(3):
        for m in range(6):
            t[k, m] = out_e[k] * cof[k, m // 2] * col[m]
        t[k, 2 * k] -= 1.0
    return ScatteringMatrix(float(omega), t)


def _ports(params: ThreeModeParams) -> list[OpticalPort]:
    return [
        OpticalPort("+", params.g1, params.loss_plus.kappa_e, params.loss_plus.kappa_i),
        OpticalPort("-", params.g2, params.loss_minus.kappa_e, params.loss_minus.kappa_i),
    ]


def solve_scattering_numeric(params: ThreeModeParams, omega: float) -> ScatteringMatrix:
    """T(omega) by numerically solving the Langevin system per input channel."""
    _require_stable(params)
    net = solve_network(_ports(params), params.loss_mw.kappa_e, params.loss_mw.kappa_i, omega)
    return ScatteringMatrix(net.omega, net.coefficients)


def _detuning_terms(params: ThreeModeParams, omega: float) -> tuple[float, float]:
    kp, km, kw = params.loss_plus.kappa, params.loss_minus.kappa, params.loss_mw.kappa
    w2 = omega * omega
    re = params.margin - 4.0 * w2 * (kp + km + kw) / (kp * km * kw)
    im = (1.0 + params.c1) / km + (1.0 - params.c2) / kp + (kp * km - 4.0 * w2) / (km * kp * kw)
    return re, im


def spectral_factor(params: ThreeModeParams, omega: float) -> float:
    """D(omega); equals 1 / (1 + C1 - C2)^2 on resonance."""
    re, im = _detuning_terms(params, omega)
    return 1.0 / (re * re + 4.0 * omega * omega * im * im)


def output_spectra(params: ThreeModeParams, omega: float) -> tuple[float, float, float]:
    """Pair-generated output photon spectra (n_plus, n_minus, n_mw) for vacuum inputs."""
    _require_stable(params)
    d = spectral_factor(params, omega)
    lor = 1.0 + 4.0 * omega * omega / params.loss_plus.kappa ** 2
    c1, c2 = params.c1, params.c2
    n_plus = 4.0 * params.loss_plus.eta * c1 * c2 * d
    n_minus = 4.0 * params.loss_minus.eta * c2 * (c1 + lor) * d
    n_mw = 4.0 * params.loss_mw.eta * c2 * lor * d
    return n_plus, n_minus, n_mw


def input_occupations(params: ThreeModeParams) -> list[float]:
    return [0.0, 0.0, 0.0, 0.0, params.noise.n_ext, params.noise.n_int]


def spectra_from_scattering(scat: ScatteringMatrix, params: ThreeModeParams | None = None):
    """Output occupations from a scattering matrix; vacuum inputs unless ``params`` gives noise."""
    occ = input_occupations(params) if params is not None else [0.0] * 6
    return tuple(float(x) for x in output_occupations(scat.as_network(), occ))


def bandwidth(params: ThreeModeParams, mode: str, strict: bool = False) -> float:
    """FWHM (MHz) of the output spectrum of ``mode`` ("plus", "minus" or "mw").

    The microwave spectrum develops side peaks when frequency conversion is
    strong; the width is then taken between the outermost half-maximum
    points of the global maximum, or an error is raised with ``strict``.
    """
    if mode not in MODES:
        raise DomainError(f"mode must be one of {MODES}, got {mode!r}")
    _require_stable(params)
    k = MODES.index(mode)
    if k == 0 and params.c1 == 0:
        raise DomainError("anti-Stokes spectrum vanishes for c1 = 0")
    if params.c2 == 0:
        raise DomainError("spectra vanish for c2 = 0")
    scale = max(params.loss_plus.kappa, params.loss_minus.kappa, params.loss_mw.kappa)
    return fwhm(lambda w: output_spectra(params, w)[k], scale, strict=strict)


def covariance(params: ThreeModeParams) -> CovarianceMatrix:
    """Closed-form 6x6 output CM on resonance, mode order (plus, minus, mw)."""
    _require_stable(params)
    c1, c2 = params.c1, params.c2
    ep, em, ew = params.loss_plus.eta, params.loss_minus.eta, params.loss_mw.eta
    nb, ne = params.n_bar, params.noise.n_ext
    d = params.margin
    d2 = d * d
    v_pp = 0.5 + 4.0 * c1 * (c2 + nb) * ep / d2
    v_mm = 0.5 + 4.0 * c2 * (c1 + 1.0 + nb) * em / d2
    v_ww = 0.5 + 4.0 * (c2 + nb) * ew / d2 + ne * (1.0 - 4.0 * ew / d)
    v_pm = np.sqrt(4.0 * ep * em * c1 * c2) * (1.0 + c1 + c2 + 2.0 * nb) / d2
    v_pw = np.sqrt(4.0 * ep * ew * c1) * (2.0 * c2 + 2.0 * nb - d * ne) / d2
    v_mw = np.sqrt(4.0 * em * ew * c2) * (1.0 + c1 + c2 + 2.0 * nb - d * ne) / d2
    eye, z = np.eye(2), np.diag([1.0, -1.0])
    v = np.block([
        [v_pp * eye, v_pm * z, v_pw * eye],
        [v_pm * z, v_mm * eye, v_mw * z],
        [v_pw * eye, v_mw * z, v_ww * eye],
    ])
    return CovarianceMatrix(v)


def covariance_from_scattering(params: ThreeModeParams, scat: ScatteringMatrix | None = None) -> CovarianceMatrix:
    """Output CM assembled from T(0) and the declared input occupations."""
    if scat is None:
        scat = solve_scattering_numeric(params, 0.0)
    return _network_covariance(scat.as_network(), input_occupations(params), THREE_MODE_FRAME)

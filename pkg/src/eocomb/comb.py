"""
Symmetric 2N-line electro-optic comb: N anti-Stokes/Stokes pairs sharing one
microwave mode, all optical lines with equal loss and equal coupling G.

Mode order is (1+, 1-, 2+, 2-, ..., N+, N-, mw), so N = 1 lines up with the
three-mode (plus, minus, mw) ordering.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import NamedTuple

import numpy as np
from numpy.typing import NDArray

from .errors import DomainError
from .gaussian import CovarianceMatrix
from .network import NetworkScattering, OpticalPort, covariance_from_scattering, output_occupations, solve_network
from .spectral import fwhm
from .threemode import MicrowaveNoise, ModeLoss


@dataclass(frozen=True)
class CombParams:
    n_pumps: int
    loss_opt: ModeLoss
    loss_mw: ModeLoss
    c: float
    noise: MicrowaveNoise = field(default_factory=MicrowaveNoise)

    def __post_init__(self):
        if int(self.n_pumps) != self.n_pumps or self.n_pumps < 1:
            raise DomainError(f"n_pumps must be a positive integer, got {self.n_pumps}")
        if self.c < 0:
            raise DomainError("cooperativity must be nonnegative")

    @property
    def g(self) -> float:
        return 0.5 * np.sqrt(self.c * self.loss_opt.kappa * self.loss_mw.kappa)

    @property
    def n_bar(self) -> float:
        return self.noise.n_bar(self.loss_mw)

    @property
    def mode_count(self) -> int:
        return 2 * self.n_pumps + 1


def comb_frame(n_pumps: int) -> tuple[float, ...]:
    return (0.0, np.pi) * n_pumps + (1.5 * np.pi,)


def plus_index(j: int) -> int:
    return 2 * j


def minus_index(j: int) -> int:
    return 2 * j + 1


def spectral_factor(params: CombParams, omega: float) -> float:
    """D2(omega) = [(1 + 4w^2/kappa_o^2)^2 (1 + 4w^2/kappa_mw^2)]^-1."""
    xo = 4.0 * omega * omega / params.loss_opt.kappa ** 2
    xw = 4.0 * omega * omega / params.loss_mw.kappa ** 2
    return 1.0 / ((1.0 + xo) ** 2 * (1.0 + xw))


def comb_spectra(params: CombParams, omega: float) -> tuple[float, float, float]:
    """Per-line output spectra (n_j+, n_j-, n_mw) for vacuum inputs."""
    n, c = params.n_pumps, params.c
    eta_o, eta_w = params.loss_opt.eta, params.loss_mw.eta
    d2 = spectral_factor(params, omega)
    lor = 1.0 + 4.0 * omega * omega / params.loss_opt.kappa ** 2
    return (
        4.0 * eta_o * n * c * c * d2,
        4.0 * eta_o * c * (n * c + lor) * d2,
        4.0 * eta_w * n * c * lor * d2,
    )


def comb_bandwidths(params: CombParams, strict: bool = False) -> tuple[float, float, float]:
    """FWHM (MHz) of the anti-Stokes, Stokes and microwave spectra."""
    if params.c == 0:
        raise DomainError("spectra vanish for c = 0")
    scale = max(params.loss_opt.kappa, params.loss_mw.kappa)
    return tuple(fwhm(lambda w, k=k: comb_spectra(params, w)[k], scale, strict=strict) for k in range(3))


def comb_elements(params: CombParams) -> dict[str, float]:
    """Distinct covariance entries of the comb output CM on resonance."""
    n, c = params.n_pumps, params.c
    eo, ew = params.loss_opt.eta, params.loss_mw.eta
    nb, ne = params.n_bar, params.noise.n_ext
    root = np.sqrt(4.0 * eo * ew * c)
    return {
        "V_plus": 0.5 + 4.0 * eo * c * (nb + n * c),
        "V_minus": 0.5 + 4.0 * eo * c * (nb + 1.0 + n * c),
        "V_mw": 0.5 + 4.0 * ew * (nb + n * c) + ne * (1.0 - 4.0 * ew),
        "V_plus_minus": 2.0 * eo * c * (2.0 * nb + 1.0 + 2.0 * n * c),
        "V_plus_mw": root * (2.0 * nb - ne + 2.0 * n * c),
        "V_minus_mw": root * (2.0 * nb - ne + 1.0 + 2.0 * n * c),
        "V_plus_plus": 4.0 * eo * c * (nb + n * c),
        "V_minus_minus": 4.0 * eo * c * (nb + 1.0 + n * c),
    }


def comb_covariance(params: CombParams) -> CovarianceMatrix:
    """(2N+1)-mode output CM: I blocks for (j+,k+), (j-,k-), (j+,mw); Z blocks for (j+,k-), (j-,mw)."""
    el = comb_elements(params)
    n = params.n_pumps
    m = params.mode_count
    eye, z = np.eye(2), np.diag([1.0, -1.0])
    v = np.zeros((2 * m, 2 * m))

    def put(a, b, blk):
        v[2 * a:2 * a + 2, 2 * b:2 * b + 2] = blk
        v[2 * b:2 * b + 2, 2 * a:2 * a + 2] = blk

    mw = m - 1
    for j in range(n):
        put(plus_index(j), plus_index(j), el["V_plus"] * eye)
        put(minus_index(j), minus_index(j), el["V_minus"] * eye)
        put(plus_index(j), mw, el["V_plus_mw"] * eye)
        put(minus_index(j), mw, el["V_minus_mw"] * z)
        for k in range(n):
            put(plus_index(j), minus_index(k), el["V_plus_minus"] * z)
            if k != j:
                put(plus_index(j), plus_index(k), el["V_plus_plus"] * eye)
                put(minus_index(j), minus_index(k), el["V_minus_minus"] * eye)
    put(mw, mw, el["V_mw"] * eye)
    return CovarianceMatrix(v)


@dataclass(frozen=True)
class CombResonanceTable:
    """On-resonance input-output coefficients of the symmetric comb.

    Rows: anti-Stokes output a_j+, Stokes output a_j-^dag, microwave a_mw.
    ``*_e`` / ``*_i`` multiply external / internal inputs.  "cross" means
    the same kind of line belonging to another pump, "other" the opposite
    kind on every pump (own pair included).
    """

    plus_self: tuple[complex, complex]
    plus_cross: tuple[complex, complex]
    plus_other: tuple[complex, complex]
    plus_mw: tuple[complex, complex]
    minus_self: tuple[complex, complex]
    minus_cross: tuple[complex, complex]
    minus_other: tuple[complex, complex]
    minus_mw: tuple[complex, complex]
    mw_self: tuple[complex, complex]
    mw_plus: tuple[complex, complex]
    mw_minus: tuple[complex, complex]

    def to_network(self, n_pumps: int) -> NetworkScattering:
        m = 2 * n_pumps + 1
        t = np.zeros((m, 2 * m), dtype=complex)
        mw = m - 1

        def put(row, mode, pair):
            t[row, 2 * mode] = pair[0]
            t[row, 2 * mode + 1] = pair[1]

        for j in range(n_pumps):
            rp, rm = plus_index(j), minus_index(j)
            for k in range(n_pumps):
                put(rp, plus_index(k), self.plus_self if k == j else self.plus_cross)
                put(rp, minus_index(k), self.plus_other)
                put(rm, minus_index(k), self.minus_self if k == j else self.minus_cross)
                put(rm, plus_index(k), self.minus_other)
                put(mw, plus_index(k), self.mw_plus)
                put(mw, minus_index(k), self.mw_minus)
            put(rp, mw, self.plus_mw)
            put(rm, mw, self.minus_mw)
        put(mw, mw, self.mw_self)
        out_conj = (False, True) * n_pumps + (False,)
        in_conj = tuple(f for f in out_conj for _ in range(2))
        return NetworkScattering(0.0, t, out_conj, in_conj)


def comb_scattering_resonance(params: CombParams) -> CombResonanceTable:
    c = params.c
    eo, ew = params.loss_opt.eta, params.loss_mw.eta
    so = np.sqrt(eo * (1.0 - eo))
    sw = np.sqrt(ew * (1.0 - ew))
    xe = 2.0 * np.sqrt(c * eo * ew)          # optical external <-> microwave external
    xi_w = 2.0 * np.sqrt(c * eo * (1.0 - ew))  # optical external <- microwave internal
    xi_o = 2.0 * np.sqrt(c * (1.0 - eo) * ew)  # microwave external <- optical internal
    amp = (2.0 * eo * c, 2.0 * c * so)
    return CombResonanceTable(
        plus_self=(2.0 * eo - 1.0 - 2.0 * eo * c, 2.0 * so * (1.0 - c)),
        plus_cross=(-amp[0], -amp[1]),
        plus_other=(-amp[0], -amp[1]),
        plus_mw=(-1j * xe, -1j * xi_w),
        minus_self=(2.0 * eo - 1.0 + 2.0 * eo * c, 2.0 * so * (1.0 + c)),
        minus_cross=amp,
        minus_other=amp,
        minus_mw=(1j * xe, 1j * xi_w),
        mw_self=(2.0 * ew - 1.0, 2.0 * sw),
        mw_plus=(-1j * xe, -1j * xi_o),
        mw_minus=(-1j * xe, -1j * xi_o),
    )


def comb_input_occupations(params: CombParams) -> list[float]:
    return [0.0] * (4 * params.n_pumps) + [params.noise.n_ext, params.noise.n_int]


def comb_covariance_from_scattering(params: CombParams, net: NetworkScattering | None = None) -> CovarianceMatrix:
    """CM rebuilt from a scattering table (resonance coefficients unless ``net`` is given)."""
    if net is None:
        net = comb_scattering_resonance(params).to_network(params.n_pumps)
    return covariance_from_scattering(net, comb_input_occupations(params), comb_frame(params.n_pumps))


def comb_scattering_numeric(params: CombParams, omega: float) -> NetworkScattering:
    """Full (2N+1)-mode linear solve of the comb Langevin equations."""
    lo = params.loss_opt
    ports = []
    for _ in range(params.n_pumps):
        ports.append(OpticalPort("+", params.g, lo.kappa_e, lo.kappa_i))
        ports.append(OpticalPort("-", params.g, lo.kappa_e, lo.kappa_i))
    return solve_network(ports, params.loss_mw.kappa_e, params.loss_mw.kappa_i, omega)


def comb_spectra_numeric(params: CombParams, omega: float) -> tuple[float, float, float]:
    occ = output_occupations(comb_scattering_numeric(params, omega), [0.0] * (2 * params.mode_count))
    return float(occ[0]), float(occ[1]), float(occ[-1])


class DqPair(NamedTuple):
    dq_minus: float
    dq_plus: float


class CombSqueezing(NamedTuple):
    minus_plus: DqPair
    minus_mw: DqPair


def comb_squeezing(params: CombParams) -> CombSqueezing:
    """Closed-form squeezing of the {j-, j+} and {j-, mw} quadrature pairs (noiseless bath)."""
    if params.n_bar != 0 or params.noise.n_ext != 0:
        raise DomainError("closed-form comb squeezing assumes a noiseless microwave bath; "
                          "use squeezing_ellipse on comb_covariance instead")
    n, c = params.n_pumps, params.c
    eo, ew = params.loss_opt.eta, params.loss_mw.eta

    x = 1.0 + 2.0 * n * c
    root = np.sqrt(1.0 + x * x)
    num = 0.5 + 4.0 * eo * c + 8.0 * eo * c * c * (n - eo)
    den_sq = 1.0 + 4.0 * eo * c * (x + root)
    # x - root rewritten as -1/(x + root) to keep precision at large N*C
    den_anti = 1.0 - 4.0 * eo * c / (x + root)
    pm = DqPair(float(np.sqrt(num / den_sq)), float(np.sqrt(num / den_anti)))

    psi = 4.0 * c * (eo * (n * c + 1.0) + n * ew)
    k = 16.0 * eo * ew * c
    root = np.sqrt(psi * psi + k)
    num = 0.5 + psi - 8.0 * c * ew * eo
    den_sq = 1.0 + psi + root
    den_anti = 1.0 - k / (psi + root) if psi + root > 0 else 1.0
    mw = DqPair(float(np.sqrt(num / den_sq)), float(np.sqrt(num / den_anti)))
    return CombSqueezing(pm, mw)

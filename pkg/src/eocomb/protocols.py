"""
Channel figures of merit built on cross-quadrature squeezing: Braunstein-Kimble
teleportation fidelities, the classical fidelity benchmark and dense coding.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np

from .errors import DomainError


@dataclass(frozen=True)
class InputState:
    """Teleported input: a squeezed coherent state or a cat N(|a> + e^{i phi}|-a>)."""

    kind: str
    alpha: complex = 0.0
    r: float = 0.0
    phi: float = 0.0

    KINDS = ("squeezed_coherent", "cat")

    def __post_init__(self):
        if self.kind not in self.KINDS:
            raise DomainError(f"kind must be one of {self.KINDS}, got {self.kind!r}")
        if not np.isfinite(abs(self.alpha)):
            raise DomainError("alpha must be finite")
        if self.r < 0:
            raise DomainError("squeezing parameter r must be nonnegative")

    @classmethod
    def squeezed_coherent(cls, alpha: complex = 1.0, r: float = 0.5) -> "InputState":
        return cls("squeezed_coherent", complex(alpha), r=float(r))

    @classmethod
    def cat(cls, alpha: complex = 1.0, phi: float = -np.pi / 2) -> "InputState":
        return cls("cat", complex(alpha), phi=float(phi))


def _check_dq(dq_minus: float) -> float:
    if dq_minus < 0 or not np.isfinite(dq_minus):
        raise DomainError(f"dq_minus must be a finite nonnegative number, got {dq_minus}")
    return float(dq_minus) ** 2


def teleport_fidelity_gaussian(dq_minus: float, alpha: complex = 0.0, r: float = 0.0) -> float:
    """(4 dq^4 + 4 dq^2 cosh 2r + 1)^(-1/2); the displacement ``alpha`` drops out."""
    d2 = _check_dq(dq_minus)
    if r < 0:
        raise DomainError("squeezing parameter r must be nonnegative")
    return float(1.0 / np.sqrt(4.0 * d2 * d2 + 4.0 * d2 * np.cosh(2.0 * r) + 1.0))


def teleport_fidelity_cat(dq_minus: float, alpha: complex = 1.0, phi: float = -np.pi / 2) -> float:
    d2 = _check_dq(dq_minus)
    a2 = abs(alpha) ** 2
    s = 1.0 + 2.0 * d2
    norm = 1.0 + np.exp(-2.0 * a2) * np.cos(phi)
    if norm <= 0:
        raise DomainError("cat state with alpha = 0 and phi = pi has zero norm")
    num = 1.0 + np.exp(-4.0 * a2) - np.exp(-4.0 * a2 / s) - np.exp(-8.0 * d2 * a2 / s)
    return float(1.0 / s - num / (2.0 * s * norm * norm))


def teleport_fidelity(state: InputState, dq_minus: float) -> float:
    if state.kind == "cat":
        return teleport_fidelity_cat(dq_minus, state.alpha, state.phi)
    return teleport_fidelity_gaussian(dq_minus, state.alpha, state.r)


def classical_fidelity_limit(r: float, variant: str = "benchmark") -> float:
    """Best fidelity without entanglement for a squeezed input.

    ``benchmark`` is e^-r/(1 + e^-2r); ``caption`` is the e^-r/(1 + e^2r)
    variant, kept for comparison.  Both give 1/2 at r = 0.
    """
    if r < 0:
        raise DomainError("squeezing parameter r must be nonnegative")
    if variant == "benchmark":
        return float(np.exp(-r) / (1.0 + np.exp(-2.0 * r)))
    if variant == "caption":
        return float(np.exp(-r) / (1.0 + np.exp(2.0 * r)))
    raise DomainError(f"variant must be 'benchmark' or 'caption', got {variant!r}")


CONVENTIONS = ("printed", "variance")


@dataclass(frozen=True)
class ChannelSpec:
    """Entangled resource for dense coding.

    ``printed`` takes V_ne = 2 dq_minus and b = 2 dq_plus - 1/V_ne.
    ``variance`` normalises variances to the vacuum instead, V_ne = 2 dq_minus^2
    and b = 2 dq_plus^2 - 1/V_ne, so that an unentangled vacuum pair
    (dq = sqrt(0.5)) gives V_ne = 1, b = 0.
    """

    dq_minus: float
    dq_plus: float
    n_mean: float
    eta_det: float = 1.0
    convention: str = "printed"

    def __post_init__(self):
        if self.dq_minus > self.dq_plus:
            raise DomainError("dq_minus must not exceed dq_plus")
        if self.n_mean < 0:
            raise DomainError("mean photon number must be nonnegative")
        if not 0.0 <= self.eta_det <= 1.0:
            raise DomainError("detection efficiency must lie in [0, 1]")
        if self.convention not in CONVENTIONS:
            raise DomainError(f"convention must be one of {CONVENTIONS}, got {self.convention!r}")

    @property
    def v_ne(self) -> float:
        if self.convention == "variance":
            return 2.0 * self.dq_minus ** 2
        return 2.0 * self.dq_minus

    @property
    def b(self) -> float:
        if self.convention == "variance":
            return 2.0 * self.dq_plus ** 2 - 1.0 / self.v_ne
        return 2.0 * self.dq_plus - 1.0 / self.v_ne


@dataclass(frozen=True)
class Capacities:
    coherent_homodyne: float
    coherent_heterodyne: float
    dense_coding: float


def capacities_from_variances(v_ne: float, b: float, n_mean: float, eta_det: float = 1.0) -> Capacities:
    """(C_c, C_ch, C_dc) in bits per use for a resource with noise variance V_ne and excess b."""
    if v_ne <= 0:
        raise DomainError("V_ne must be positive")
    if n_mean < 0:
        raise DomainError("mean photon number must be nonnegative")
    if not 0.0 <= eta_det <= 1.0:
        raise DomainError("detection efficiency must lie in [0, 1]")
    n, eta = n_mean, eta_det
    c_c = 0.5 * np.log2(1.0 + 4.0 * n)
    c_ch = np.log2(1.0 + n)
    gain = eta * (4.0 * n - v_ne - 1.0 / v_ne - b + 2.0) / (4.0 * (eta * v_ne + 1.0 - eta))
    if gain < 0:
        warnings.warn(f"dense-coding gain {gain:.3e} is negative (noisy channel); capacity clamped to 0",
                      RuntimeWarning, stacklevel=2)
        c_dc = 0.0
    else:
        c_dc = np.log2(1.0 + gain)
    return Capacities(float(c_c), float(c_ch), float(c_dc))


def dense_coding_capacities(spec: ChannelSpec) -> Capacities:
    return capacities_from_variances(spec.v_ne, spec.b, spec.n_mean, spec.eta_det)

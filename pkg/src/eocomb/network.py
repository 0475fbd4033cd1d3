"""
Direct numerical solution of linearized Langevin networks.

A set of optical cavity modes couples to one shared microwave mode either
through a beam-splitter term (anti-Stokes, ``kind="+"``) or a two-mode
squeezing term (Stokes, ``kind="-"``).  The Fourier-domain equations are
assembled straight from the equations of motion

    da_+/dt = -i G a_W       - kappa_+/2 a_+ + F_+
    da_-/dt = -i G a_W^dag   - kappa_-/2 a_- + F_-
    da_W/dt = -i sum(G* a_+ + G a_-^dag) - kappa_W/2 a_W + F_W

and solved per input channel with a dense linear solve; the single-port
relation a_out = sqrt(kappa_e) a - a_e then gives the scattering matrix.
Nothing here uses hand-derived closed forms, which is what makes it a
useful oracle for them.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np
from numpy.typing import NDArray

from .errors import DomainError, SingularSystemError
from .gaussian import CovarianceMatrix


@dataclass(frozen=True)
class OpticalPort:
    kind: str  # "+" beam-splitter coupled, "-" squeezer coupled
    coupling: complex
    kappa_e: float
    kappa_i: float

    def __post_init__(self):
        if self.kind not in ("+", "-"):
            raise DomainError(f"optical port kind must be '+' or '-', got {self.kind!r}")


@dataclass(frozen=True)
class NetworkScattering:
    """Output-from-input coefficients.

    Row k describes output operator a_k (or a_k^dag when ``out_conj[k]``);
    columns run over the (external, internal) input pair of every mode in
    order, and column j multiplies an input annihilation operator unless
    ``in_conj[j]``.
    """

    omega: float
    coefficients: NDArray[np.complex128]
    out_conj: tuple[bool, ...]
    in_conj: tuple[bool, ...]

    def annihilation_form(self) -> tuple[NDArray[np.complex128], NDArray[np.complex128]]:
        """Matrices (alpha, beta) with a_out_k = sum_m alpha_km a_m + beta_km a_m^dag."""
        t = np.array(self.coefficients, dtype=complex)
        n_out, n_in = t.shape
        alpha = np.zeros((n_out, n_in), dtype=complex)
        beta = np.zeros((n_out, n_in), dtype=complex)
        for k in range(n_out):
            row = np.conj(t[k]) if self.out_conj[k] else t[k]
            for m in range(n_in):
                dag = self.in_conj[m] != self.out_conj[k]
                if dag:
                    beta[k, m] = row[m]
                else:
                    alpha[k, m] = row[m]
        return alpha, beta


def solve_network(
    ports: Sequence[OpticalPort], mw_kappa_e: float, mw_kappa_i: float, omega: float
) -> NetworkScattering:
    n = len(ports) + 1
    a = np.zeros((n, n), dtype=complex)
    f = np.zeros((n, 2 * n), dtype=complex)
    mw = n - 1
    for j, port in enumerate(ports):
        g = complex(port.coupling)
        a[j, j] = 0.5 * (port.kappa_e + port.kappa_i) - 1j * omega
        if port.kind == "+":
            # unknown a_+ ; microwave row picks up G* a_+
            a[j, mw] = 1j * g
            a[mw, j] = 1j * np.conj(g)
        else:
            # unknown a_-^dag ; conjugated equation of motion
            a[j, mw] = -1j * np.conj(g)
            a[mw, j] = 1j * g
        f[j, 2 * j] = np.sqrt(port.kappa_e)
        f[j, 2 * j + 1] = np.sqrt(port.kappa_i)
    a[mw, mw] = 0.5 * (mw_kappa_e + mw_kappa_i) - 1j * omega
    f[mw, 2 * mw] = np.sqrt(mw_kappa_e)
    f[mw, 2 * mw + 1] = np.sqrt(mw_kappa_i)

    if np.linalg.cond(a) > 1e14:
        raise SingularSystemError("Langevin system is singular (at or beyond threshold)")
    intra = np.linalg.solve(a, f)
    kappa_e = np.array([p.kappa_e for p in ports] + [mw_kappa_e])
    t = np.sqrt(kappa_e)[:, None] * intra
    for k in range(n):
        t[k, 2 * k] -= 1.0
    out_conj = tuple(p.kind == "-" for p in ports) + (False,)
    in_conj = tuple(flag for flag in out_conj for _ in range(2))
    return NetworkScattering(float(omega), t, out_conj, in_conj)


def _quadrature_block(c: complex, dagger: bool) -> NDArray[np.float64]:
    if dagger:
        return np.array([[c.real, c.imag], [c.imag, -c.real]])
    return np.array([[c.real, -c.imag], [c.imag, c.real]])


def frame_rotation(phases: Sequence[float]) -> NDArray[np.float64]:
    """Block-diagonal quadrature rotation for local reference phases a_k -> exp(i phi_k) a_k."""
    r = np.zeros((2 * len(phases), 2 * len(phases)))
    for k, phi in enumerate(phases):
        c, s = np.cos(phi), np.sin(phi)
        r[2 * k : 2 * k + 2, 2 * k : 2 * k + 2] = [[c, -s], [s, c]]
    return r


def covariance_from_scattering(
    scat: NetworkScattering, occupations: Sequence[float], phases: Sequence[float] | None = None
) -> CovarianceMatrix:
    """Output CM for thermal inputs with the given occupation per input column."""
    alpha, beta = scat.annihilation_form()
    n_out, n_in = alpha.shape
    if len(occupations) != n_in:
        raise DomainError(f"need {n_in} input occupations, got {len(occupations)}")
    s = np.zeros((2 * n_out, 2 * n_in))
    for k in range(n_out):
        for m in range(n_in):
            blk = _quadrature_block(complex(alpha[k, m]), False) + _quadrature_block(complex(beta[k, m]), True)
            s[2 * k : 2 * k + 2, 2 * m : 2 * m + 2] = blk
    v_in = np.diag(np.repeat(np.asarray(occupations, dtype=float) + 0.5, 2))
    v = s @ v_in @ s.T
    if phases is not None:
        r = frame_rotation(phases)
        v = r @ v @ r.T
    return CovarianceMatrix(0.5 * (v + v.T))


def output_occupations(scat: NetworkScattering, occupations: Sequence[float]) -> NDArray[np.float64]:
    """<a_out^dag a_out> for every output."""
    alpha, beta = scat.annihilation_form()
    n = np.asarray(occupations, dtype=float)
    return (np.abs(alpha) ** 2 @ n + np.abs(beta) ** 2 @ (n + 1.0)).real


def cross_moments(scat: NetworkScattering, occupations: Sequence[float], j: int, k: int) -> tuple[complex, complex]:
    """(<a_j a_k>, <a_j^dag a_k>) of two distinct outputs."""
    alpha, beta = scat.annihilation_form()
    n = np.asarray(occupations, dtype=float)
    aa = np.sum(alpha[j] * beta[k] * (n + 1.0) + beta[j] * alpha[k] * n)
    ad_a = np.sum(np.conj(alpha[j]) * alpha[k] * n + np.conj(beta[j]) * beta[k] * (n + 1.0))
    return complex(aa), complex(ad_a)


def bogoliubov_defects(scat: NetworkScattering) -> NDArray[np.float64]:
    """sum|alpha|^2 - sum|beta|^2 - 1 per output; zero when [a, a^dag] = 1 is preserved."""
    alpha, beta = scat.annihilation_form()
    return np.sum(np.abs(alpha) ** 2, axis=1) - np.sum(np.abs(beta) ** 2, axis=1) - 1.0

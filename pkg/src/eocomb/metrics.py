"""
Two-mode correlation metrics for the three-mode source.

Pairs are labelled by two letters from p (anti-Stokes), m (Stokes) and
K (microwave); the first letter is the first mode of the reduced CM, so
``"mp"`` gives V11 = Stokes, V33 = anti-Stokes.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np

from .errors import DomainError, UnphysicalStateError
from .gaussian import CovarianceMatrix, _matrix, entropy_h, reduce, symplectic_pair
from .network import cross_moments, output_occupations
from .threemode import (
    ThreeModeParams,
    _require_stable,
    covariance,
    input_occupations,
    output_spectra,
    solve_scattering_numeric,
)

NEGATIVE_CLAMP = 1e-9
MODE_INDEX = {"p": 0, "m": 1, "K": 2}
# pairs whose correlations live in <a_j a_k> (two-mode squeezing); the rest are beam-splitter-like
Z_COUPLED = frozenset({frozenset("pm"), frozenset("mK")})


def pair_modes(pair: str) -> tuple[int, int]:
    if len(pair) != 2 or any(ch not in MODE_INDEX for ch in pair) or pair[0] == pair[1]:
        raise DomainError(f"pair must be two distinct letters from 'p', 'm', 'K', got {pair!r}")
    return MODE_INDEX[pair[0]], MODE_INDEX[pair[1]]


def _check_rates(pair: str, params: ThreeModeParams) -> None:
    losses = {"p": params.loss_plus, "m": params.loss_minus, "K": params.loss_mw}
    for ch in pair:
        if losses[ch].eta == 0:
            raise DomainError(f"mode {ch!r} has no external coupling, its photon rate is zero")
    n = output_spectra(params, 0.0)
    for ch in pair:
        if n[MODE_INDEX[ch]] <= 0:
            raise DomainError(f"photon rate of mode {ch!r} is zero; epsilon is undefined")


def schwarz_epsilon(pair: str, params: ThreeModeParams) -> float:
    """Natural-log Cauchy-Schwarz ratio ln(|<a_j a_k>| / sqrt(n_j n_k)) on resonance, closed form.

    For the anti-Stokes/microwave pair the relevant moment is <a_j^dag a_k>
    (the only nonzero cross-correlation) and the value never exceeds 0.
    """
    pair_modes(pair)
    _require_stable(params)
    _check_rates(pair, params)
    c1, c2 = params.c1, params.c2
    nb, ne = params.n_bar, params.noise.n_ext
    d = params.margin
    key = frozenset(pair)
    if key == frozenset("pm"):
        num = 1.0 + c1 + c2 + 2.0 * nb
        den = np.sqrt(4.0 * (c2 + nb) * (c1 + 1.0 + nb))
    else:
        mw_rate = 4.0 * (c2 + nb) + ne * (d * d / params.loss_mw.eta - 4.0 * d)
        if key == frozenset("mK"):
            num = 1.0 + c1 + c2 + 2.0 * nb - d * ne
            den = np.sqrt((c1 + 1.0 + nb) * mw_rate)
        else:
            num = 2.0 * c2 + 2.0 * nb - d * ne
            den = np.sqrt((c2 + nb) * mw_rate)
    return float(np.log(abs(num) / den))


def schwarz_epsilon_moments(pair: str, params: ThreeModeParams) -> float:
    """Same ratio built from the numerically solved scattering coefficients at omega = 0."""
    j, k = pair_modes(pair)
    _require_stable(params)
    _check_rates(pair, params)
    net = solve_scattering_numeric(params, 0.0).as_network()
    occ = input_occupations(params)
    n = output_occupations(net, occ)
    aa, ada = cross_moments(net, occ, j, k)
    moment = aa if frozenset(pair) in Z_COUPLED else ada
    return float(np.log(abs(moment) / np.sqrt(n[j] * n[k])))


def schwarz_epsilon_from_cm(cm2: CovarianceMatrix, moment: str = "auto") -> float:
    """Schwarz ratio read off a two-mode CM (zero-mean state).

    ``moment`` selects <a1 a2> ("aa"), <a1^dag a2> ("ada") or the larger of
    the two ("auto").
    """
    v = _matrix(cm2)
    if v.shape != (4, 4):
        raise DomainError("schwarz_epsilon_from_cm needs a two-mode covariance matrix")
    c = v[0:2, 2:4]
    aa = 0.5 * complex(c[0, 0] - c[1, 1], c[0, 1] + c[1, 0])
    ada = 0.5 * complex(c[0, 0] + c[1, 1], c[0, 1] - c[1, 0])
    n1 = 0.5 * (v[0, 0] + v[1, 1]) - 0.5
    n2 = 0.5 * (v[2, 2] + v[3, 3]) - 0.5
    if n1 <= 0 or n2 <= 0:
        raise DomainError("photon number of a mode is zero; epsilon is undefined")
    if moment == "aa":
        m = abs(aa)
    elif moment == "ada":
        m = abs(ada)
    elif moment == "auto":
        m = max(abs(aa), abs(ada))
    else:
        raise DomainError(f"moment must be 'aa', 'ada' or 'auto', got {moment!r}")
    return float(np.log(m / np.sqrt(n1 * n2)))


def _local_invariants(cm2, direction: str):
    v = _matrix(cm2)
    if v.shape != (4, 4):
        raise DomainError("two-mode covariance matrix required")
    if direction not in ("forward", "reverse"):
        raise DomainError(f"direction must be 'forward' or 'reverse', got {direction!r}")
    det_a = np.linalg.det(v[0:2, 0:2])
    det_b = np.linalg.det(v[2:4, 2:4])
    det_c = np.linalg.det(v[0:2, 2:4])
    a, b = np.sqrt(max(det_a, 0.0)), np.sqrt(max(det_b, 0.0))
    if direction == "reverse":
        a, b = b, a
    return float(a), float(b), float(abs(det_c))


def coherent_information(cm2: CovarianceMatrix, direction: str = "forward") -> float:
    """I(1>2) = h(V11) - h(d+) - h(d-) in bits; ``reverse`` swaps the roles of the modes.

    V11 is taken as sqrt(det A), the local symplectic eigenvalue, which equals
    the diagonal entry for the isotropic blocks produced by this model.
    """
    a, _, _ = _local_invariants(cm2, direction)
    sp = symplectic_pair(cm2)
    return entropy_h(a) - entropy_h(sp.d_plus) - entropy_h(sp.d_minus)


def log_negativity(cm2: CovarianceMatrix) -> float:
    """max(0, -log2(2 d~-)) in ebits."""
    sp = symplectic_pair(cm2)
    if sp.d_tilde_minus <= 0:
        raise UnphysicalStateError("vanishing partially transposed symplectic eigenvalue")
    return max(0.0, float(-np.log2(2.0 * sp.d_tilde_minus)))


def discord(cm2: CovarianceMatrix, direction: str = "forward") -> float:
    """Gaussian discord with the second mode measured (``reverse`` measures the first).

    The conditional term V11 + V13^2 (1 - V33)/(V33^2 - 1) is evaluated in its
    cancelled form V11 - V13^2/(V33 + 1), which has no pole at V33 = 1.
    """
    a, b, c2 = _local_invariants(cm2, direction)
    sp = symplectic_pair(cm2)
    cond = a - c2 / (b + 1.0)
    value = entropy_h(b) - entropy_h(sp.d_minus) - entropy_h(sp.d_plus) + entropy_h(cond)
    if value < 0.0:
        if value < -NEGATIVE_CLAMP:
            raise UnphysicalStateError(f"discord evaluated to {value:.3e}")
        value = 0.0
    return float(value)


@dataclass(frozen=True)
class MetricsResult:
    pair: str
    epsilon: Optional[float]
    coh_info: float
    log_neg: float
    discord: float
    n_plus: float

    def _per(self, x: Optional[float]) -> Optional[float]:
        if x is None or self.n_plus <= 0:
            return None
        return x / self.n_plus

    @property
    def coh_info_per_photon(self) -> Optional[float]:
        return self._per(self.coh_info)

    @property
    def log_neg_per_photon(self) -> Optional[float]:
        return self._per(self.log_neg)

    @property
    def discord_per_photon(self) -> Optional[float]:
        return self._per(self.discord)


def pair_metrics(params: ThreeModeParams, pair: str = "mp", direction: str = "forward") -> MetricsResult:
    """All pair metrics at resonance; per-photon values divide by the resonant anti-Stokes rate n+(0)."""
    j, k = pair_modes(pair)
    _require_stable(params)
    cm2 = reduce(covariance(params), [j, k])
    try:
        eps = schwarz_epsilon(pair, params)
    except DomainError:
        eps = None
    return MetricsResult(
        pair=pair,
        epsilon=eps,
        coh_info=coherent_information(cm2, direction),
        log_neg=log_negativity(cm2),
        discord=discord(cm2, direction),
        n_plus=output_spectra(params, 0.0)[0],
    )

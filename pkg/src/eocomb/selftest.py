"""
Oracle batteries: every closed form is compared with an independent route
(linear solve, CM assembly from scattering coefficients, eigen-decomposition,
brute-force phase-space integration).
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np
from scipy.integrate import simpson

from . import comb as cb
from . import threemode as tm
from .gaussian import reduce, squeezing_ellipse, wigner_density
from .network import bogoliubov_defects
from .overlap import cat_overlap_fidelity, gaussian_overlap_fidelity
from .protocols import teleport_fidelity_cat, teleport_fidelity_gaussian

SEED = 20240917
ScatteringFn = Callable[[tm.ThreeModeParams, float], tm.ScatteringMatrix]


@dataclass(frozen=True)
class BatteryResult:
    name: str
    max_deviation: float
    tolerance: float
    detail: str = ""

    @property
    def passed(self) -> bool:
        return bool(np.isfinite(self.max_deviation) and self.max_deviation <= self.tolerance)

    def line(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        text = f"{status}  {self.name:<34} max dev {self.max_deviation:.3e}  (tol {self.tolerance:.0e})"
        return text + (f"  {self.detail}" if self.detail else "")


@dataclass(frozen=True)
class SelftestReport:
    results: tuple[BatteryResult, ...]

    @property
    def passed(self) -> bool:
        return all(r.passed for r in self.results)

    def to_text(self) -> str:
        lines = [r.line() for r in self.results]
        lines.append(f"selftest: {'all batteries passed' if self.passed else 'FAILED'}")
        return "\n".join(lines)


def random_three_mode(rng: np.random.Generator, noisy: bool = True) -> tm.ThreeModeParams:
    """A random stable parameter set with unequal losses."""
    c1 = rng.uniform(0.0, 5.0)
    c2 = rng.uniform(0.0, 0.95) * (1.0 + c1)
    loss = lambda: tm.ModeLoss.from_total(rng.uniform(0.5, 20.0), rng.uniform(0.2, 1.0))
    noise = tm.MicrowaveNoise(*rng.uniform(0.0, 2.0, 2)) if noisy else tm.MicrowaveNoise()
    return tm.ThreeModeParams(loss(), loss(), loss(), c1, c2, noise)


def random_battery(count: int = 100, seed: int = SEED) -> list[tm.ThreeModeParams]:
    rng = np.random.default_rng(seed)
    return [random_three_mode(rng, noisy=bool(i % 2)) for i in range(count)]


def detunings(params: tm.ThreeModeParams, count: int = 21) -> np.ndarray:
    scale = max(params.loss_plus.kappa, params.loss_minus.kappa, params.loss_mw.kappa)
    return np.linspace(-2.0 * scale, 2.0 * scale, count)


def battery_scattering(scattering: ScatteringFn, battery) -> BatteryResult:
    worst = 0.0
    for p in battery:
        for w in detunings(p):
            closed = np.asarray(scattering(p, w).coefficients)
            oracle = tm.solve_scattering_numeric(p, w).coefficients
            worst = max(worst, float(np.max(np.abs(closed - oracle)) / np.max(np.abs(oracle))))
    return BatteryResult("scattering closed form vs solve", worst, 1e-10, f"{len(battery)} sets x 21 detunings")


def battery_cm(scattering: ScatteringFn, battery) -> BatteryResult:
    worst = 0.0
    for p in battery:
        v = tm.covariance(p).entries
        v_oracle = tm.covariance_from_scattering(p, scattering(p, 0.0)).entries
        worst = max(worst, float(np.max(np.abs(v - v_oracle))))
    return BatteryResult("CM closed form vs assembly", worst, 1e-9, "includes n_ext, n_int > 0")


def battery_spectra(scattering: ScatteringFn, battery) -> BatteryResult:
    worst = 0.0
    for p in battery:
        for w in detunings(p, 7):
            closed = np.array(tm.output_spectra(p, w))
            oracle = np.array(tm.spectra_from_scattering(scattering(p, w)))
            worst = max(worst, float(np.max(np.abs(closed - oracle)) / max(1.0, np.max(oracle))))
    return BatteryResult("spectra closed form vs occupations", worst, 1e-10, "vacuum optical inputs")


def battery_balance(battery) -> BatteryResult:
    worst = 0.0
    for p in battery:
        ideal = tm.ThreeModeParams(*(tm.ModeLoss.from_total(l.kappa, 1.0)
                                     for l in (p.loss_plus, p.loss_minus, p.loss_mw)), p.c1, p.c2)
        for w in detunings(ideal, 7):
            n_plus, n_minus, n_mw = tm.output_spectra(ideal, w)
            worst = max(worst, abs(n_minus - n_plus - n_mw) / max(1.0, n_minus))
    for n in (1, 2, 4, 8):
        for c in (0.1, 1.0, 7.0):
            cp = cb.CombParams(n, tm.ModeLoss.from_total(1.75), tm.ModeLoss.from_total(12.4), c)
            for w in (0.0, 0.5, 3.0):
                n_plus, n_minus, n_mw = cb.comb_spectra(cp, w)
                worst = max(worst, abs(n * n_minus - n * n_plus - n_mw) / max(1.0, n * n_minus))
    return BatteryResult("photon balance at eta = 1", worst, 1e-12, "three-mode and comb")


def battery_bogoliubov(scattering: ScatteringFn, battery) -> BatteryResult:
    worst = 0.0
    for p in battery:
        for w in detunings(p, 5):
            worst = max(worst, float(np.max(np.abs(bogoliubov_defects(scattering(p, w).as_network())))))
    return BatteryResult("Bogoliubov row normalisation", worst, 1e-9)


def _comb_cases():
    for n in (1, 2, 4):
        for c in (0.05, 1.0, 6.0):
            for eo, ew in ((1.0, 1.0), (0.8, 0.5)):
                yield cb.CombParams(n, tm.ModeLoss.from_total(1.75, eo), tm.ModeLoss.from_total(12.4, ew),
                                    c, tm.MicrowaveNoise(0.3, 0.8))


def battery_comb_oracle() -> BatteryResult:
    worst = 0.0
    for cp in _comb_cases():
        net = cb.comb_scattering_numeric(cp, 0.0)
        table = cb.comb_scattering_resonance(cp).to_network(cp.n_pumps)
        worst = max(worst, float(np.max(np.abs(table.coefficients - net.coefficients))))
        v = cb.comb_covariance(cp).entries
        worst = max(worst, float(np.max(np.abs(v - cb.comb_covariance_from_scattering(cp, net).entries))))
    return BatteryResult("comb coefficients and CM vs solve", worst, 1e-9)


def comb_spectral_factor_report(omegas=None) -> BatteryResult:
    """Largest relative gap between the factorised comb spectra and the full linear solve."""
    omegas = np.linspace(0.0, 20.0, 41) if omegas is None else omegas
    worst = 0.0
    for cp in _comb_cases():
        quiet = cb.CombParams(cp.n_pumps, cp.loss_opt, cp.loss_mw, cp.c)
        for w in omegas:
            closed = np.array(cb.comb_spectra(quiet, w))
            exact = np.array(cb.comb_spectra_numeric(quiet, w))
            worst = max(worst, float(np.max(np.abs(closed - exact) / np.maximum(exact, 1e-300))))
    return BatteryResult("comb D2 spectra vs exact solve", worst, 1e-9, "factorised form is exact")


def battery_squeezing() -> BatteryResult:
    worst = 0.0
    for n in (1, 2, 4, 8):
        for c in np.geomspace(0.01, 100.0, 9):
            for eo, ew in ((1.0, 1.0), (0.8, 0.5), (0.3, 0.9)):
                cp = cb.CombParams(n, tm.ModeLoss.from_total(1.75, eo), tm.ModeLoss.from_total(12.4, ew), c)
                sq = cb.comb_squeezing(cp)
                v = cb.comb_covariance(cp)
                for closed, (l, k) in ((sq.minus_plus, (1, 0)), (sq.minus_mw, (1, 2 * n))):
                    eig = squeezing_ellipse(v, l, k)
                    worst = max(worst, abs(closed.dq_minus - eig.dq_minus) / eig.dq_minus,
                                abs(closed.dq_plus - eig.dq_plus) / eig.dq_plus)
    return BatteryResult("comb squeezing closed vs eigen", worst, 1e-10)


def battery_wigner(seed: int = SEED) -> BatteryResult:
    rng = np.random.default_rng(seed)
    worst = 0.0
    x = np.linspace(-12.0, 12.0, 401)
    q, p = np.meshgrid(x, x, indexing="ij")
    for _ in range(5):
        cm = tm.covariance(random_three_mode(rng))
        for mode in range(3):
            one = reduce(cm, [mode])
            w = wigner_density(one, np.stack([q, p], axis=-1))
            if 8.0 * np.sqrt(np.max(np.diag(one.entries))) > 12.0:
                continue
            worst = max(worst, abs(float(simpson(simpson(w, x=x), x=x)) - 1.0))
    return BatteryResult("Wigner normalisation", worst, 1e-8, "single-mode marginals")


def battery_fidelity() -> BatteryResult:
    worst = 0.0
    for d2 in (0.01, 0.17544, 0.5, 1.0):
        for alpha in (0.0, 1.0, 2.0):
            for r in (0.0, 0.5, 1.0):
                worst = max(worst, abs(teleport_fidelity_gaussian(np.sqrt(d2), alpha, r)
                                       - gaussian_overlap_fidelity(np.sqrt(d2), alpha, r)))
            for phi in (0.0, -np.pi / 2):
                worst = max(worst, abs(teleport_fidelity_cat(np.sqrt(d2), alpha, phi)
                                       - cat_overlap_fidelity(np.sqrt(d2), alpha, phi)))
    return BatteryResult("fidelity vs Wigner overlap", worst, 1e-6)


def run_selftest(scattering: Optional[ScatteringFn] = None, battery_size: int = 100,
                 include_slow: bool = True) -> SelftestReport:
    """Run all batteries; ``scattering`` replaces the closed-form T(omega) under test."""
    scattering = scattering or tm.scattering_matrix
    battery = random_battery(battery_size)
    results = [
        battery_scattering(scattering, battery),
        battery_cm(scattering, battery),
        battery_spectra(scattering, battery),
        battery_balance(battery),
        battery_bogoliubov(scattering, battery),
        battery_comb_oracle(),
        comb_spectral_factor_report(),
        battery_squeezing(),
        battery_wigner(),
    ]
    if include_slow:
        results.append(battery_fidelity())
    return SelftestReport(tuple(results))

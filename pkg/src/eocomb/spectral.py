"""Full width at half maximum of even, decaying spectra."""

from __future__ import annotations

from typing import Callable

import numpy as np
from scipy.optimize import brentq, minimize_scalar

from .errors import NonUnimodalSpectrumError

SpectrumFn = Callable[[float], float]


def fwhm(spectrum: SpectrumFn, scale: float, strict: bool = False, xtol: float = 1e-12) -> float:
    """Width between the outermost half-maximum crossings of ``spectrum``.

    ``spectrum`` must be even in omega and vanish at large |omega|; ``scale``
    is a characteristic rate (e.g. the largest linewidth) used to lay out
    the search grid.  With ``strict`` a maximum away from omega = 0 raises
    NonUnimodalSpectrumError instead of being handled.
    """
    grid = np.concatenate(([0.0], np.geomspace(1e-9 * scale, 1e3 * scale, 6001)))
    values = np.array([spectrum(w) for w in grid])
    peak_idx = int(np.argmax(values))
    peak = values[peak_idx]
    if peak <= 0.0:
        raise ValueError("spectrum is identically zero; bandwidth undefined")
    if peak_idx > 0:
        lo = grid[peak_idx - 1]
        hi = grid[min(peak_idx + 1, grid.size - 1)]
        res = minimize_scalar(lambda w: -spectrum(w), bounds=(lo, hi), method="bounded",
                              options={"xatol": 1e-12 * scale})
        peak = max(peak, -res.fun)
        if strict and peak > values[0] * (1.0 + 1e-9):
            raise NonUnimodalSpectrumError(
                f"spectrum maximum at omega={res.x:.6g} exceeds the resonance value")
    half = 0.5 * peak
    above = np.nonzero(values >= half)[0]
    last = int(above[-1])
    if last == grid.size - 1:
        raise ValueError("spectrum does not decay below half maximum on the search grid")
    w_half = brentq(lambda w: spectrum(w) - half, grid[last], grid[last + 1], xtol=xtol, rtol=4 * np.finfo(float).eps)
    return 2.0 * w_half

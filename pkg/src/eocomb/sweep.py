"""
Parameter sweeps and result tables.

Every grid point yields one row: the swept parameter values, the requested
quantities and a flag column.  Points that cannot be evaluated keep NaN in
the affected columns and say why in the flag, so nothing fails silently.
"""

from __future__ import annotations

import itertools
import json
import math
import os
import warnings
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from . import comb as cb
from . import threemode as tm
from .config import RunConfig, build_params
from .errors import DomainError, EOCombError, SingularSystemError, UnstableSystemError
from .gaussian import reduce, squeezing_ellipse
from .metrics import coherent_information, discord, log_negativity, pair_metrics, schwarz_epsilon_from_cm
from .protocols import (
    ChannelSpec,
    classical_fidelity_limit,
    dense_coding_capacities,
    teleport_fidelity_cat,
    teleport_fidelity_gaussian,
)

MODE_NAMES = ("plus", "minus", "mw")
SQUEEZE_PAIRS = {"three_mode": ("mp", "mK", "pK"), "comb": ("mp", "mK")}
METRIC_PAIRS = ("mp", "mK", "pK")
CHANNEL_PAIRS = ("mp", "mK")
COMB_CM_KEYS = ("V_plus", "V_minus", "V_mw", "V_plus_minus", "V_plus_mw", "V_minus_mw",
                "V_plus_plus", "V_minus_minus")
FLOAT_FORMAT = "%.12g"


def quantity_columns(model: str, quantity: str) -> list[str]:
    if quantity in ("n_out", "bandwidth"):
        return [f"{quantity}__{m}" for m in MODE_NAMES]
    if quantity == "cm":
        if model == "comb":
            return [f"cm__{k}" for k in COMB_CM_KEYS]
        return [f"cm__V{i + 1}{j + 1}" for i in range(6) for j in range(i, 6)]
    if quantity == "squeezing":
        return [f"{q}__{p}" for p in SQUEEZE_PAIRS[model] for q in ("dq_minus", "dq_plus", "theta")]
    if quantity == "metrics":
        names = ("epsilon", "coh_info", "log_neg", "discord", "coh_info_pp", "log_neg_pp", "discord_pp")
        return [f"{q}__{p}" for p in METRIC_PAIRS for q in names]
    if quantity == "fidelity":
        return [f"{q}__{p}" for p in CHANNEL_PAIRS for q in ("fid_gauss", "fid_cat")] + ["fid_classical"]
    if quantity == "capacity":
        return [f"{q}__{p}" for p in CHANNEL_PAIRS for q in ("cap_c", "cap_ch", "cap_dc")]
    raise DomainError(f"unknown quantity {quantity!r}")


# mode index in each model's CM for the pair letters
def _mode_index(model: str, letter: str, n_pumps: int = 1) -> int:
    if model == "comb":
        return {"p": cb.plus_index(0), "m": cb.minus_index(0), "K": 2 * n_pumps}[letter]
    return {"p": 0, "m": 1, "K": 2}[letter]


class _Point:
    """Lazy per-point cache of the expensive intermediate objects."""

    def __init__(self, model: str, p: dict, protocol: dict):
        self.model, self.p, self.protocol = model, p, protocol
        self.params = build_params(model, p)
        self._cm = None
        self._n0 = None

    @property
    def n_pumps(self) -> int:
        return self.params.n_pumps if self.model == "comb" else 1

    def spectra(self, omega: float):
        if self.model == "comb":
            return cb.comb_spectra(self.params, omega)
        return tm.output_spectra(self.params, omega)

    @property
    def n0(self):
        if self._n0 is None:
            self._n0 = self.spectra(0.0)
        return self._n0

    @property
    def cm(self):
        if self._cm is None:
            self._cm = cb.comb_covariance(self.params) if self.model == "comb" else tm.covariance(self.params)
        return self._cm

    def squeezing(self, pair: str) -> tuple[float, float, float]:
        l, k = (_mode_index(self.model, ch, self.n_pumps) for ch in pair)
        ell = squeezing_ellipse(self.cm, l, k)
        if self.model == "comb" and pair in ("mp", "mK") and self.params.noise == tm.MicrowaveNoise():
            closed = cb.comb_squeezing(self.params)
            dq = closed.minus_plus if pair == "mp" else closed.minus_mw
            return dq.dq_minus, dq.dq_plus, ell.theta
        return ell.dq_minus, ell.dq_plus, ell.theta


def _eval_quantity(pt: _Point, quantity: str) -> list[float]:
    model = pt.model
    if quantity == "n_out":
        return list(pt.spectra(pt.p["omega"]))
    if quantity == "bandwidth":
        if model == "comb":
            return list(cb.comb_bandwidths(pt.params))
        out = []
        for mode in MODE_NAMES:
            try:
                out.append(tm.bandwidth(pt.params, mode))
            except DomainError:
                out.append(math.nan)
        return out
    if quantity == "cm":
        if model == "comb":
            el = cb.comb_elements(pt.params)
            return [el[k] for k in COMB_CM_KEYS]
        v = pt.cm.entries
        return [v[i, j] for i in range(6) for j in range(i, 6)]
    if quantity == "squeezing":
        return [x for pair in SQUEEZE_PAIRS[model] for x in pt.squeezing(pair)]
    if quantity == "metrics":
        out = []
        for pair in METRIC_PAIRS:
            if model == "three_mode":
                r = pair_metrics(pt.params, pair)
                eps, ci, ln, dc, n_plus = r.epsilon, r.coh_info, r.log_neg, r.discord, r.n_plus
            else:
                idx = [_mode_index(model, ch, pt.n_pumps) for ch in pair]
                cm2 = reduce(pt.cm, idx)
                try:
                    eps = schwarz_epsilon_from_cm(cm2)
                except DomainError:
                    eps = None
                ci, ln, dc = coherent_information(cm2), log_negativity(cm2), discord(cm2)
                n_plus = pt.n0[0]
            per = (lambda x: x / n_plus) if n_plus > 0 else (lambda x: math.nan)
            out += [math.nan if eps is None else eps, ci, ln, dc, per(ci), per(ln), per(dc)]
        return out
    proto = pt.protocol
    if quantity == "fidelity":
        alpha = complex(proto["alpha"], proto["alpha_imag"])
        out = []
        for pair in CHANNEL_PAIRS:
            dqm = pt.squeezing(pair)[0]
            out += [teleport_fidelity_gaussian(dqm, alpha, proto["r"]),
                    teleport_fidelity_cat(dqm, alpha, proto["phi"])]
        return out + [classical_fidelity_limit(proto["r"])]
    if quantity == "capacity":
        out = []
        n_stokes = pt.n0[1]
        for pair in CHANNEL_PAIRS:
            dqm, dqp, _ = pt.squeezing(pair)
            spec = ChannelSpec(dqm, dqp, n_stokes, proto["eta_det"], proto["convention"])
            cap = dense_coding_capacities(spec)
            out += [cap.coherent_homodyne, cap.coherent_heterodyne, cap.dense_coding]
        return out
    raise DomainError(f"unknown quantity {quantity!r}")


def _flag_for(exc: Exception) -> str:
    if isinstance(exc, UnstableSystemError):
        return "unstable"
    if isinstance(exc, (SingularSystemError, ArithmeticError, np.linalg.LinAlgError)):
        return f"numerical:{type(exc).__name__}"
    return f"domain:{type(exc).__name__}"


def evaluate_point(model: str, p: dict, quantities, protocol: dict) -> tuple[list[float], str]:
    """Values for one grid point and its flag ("ok", "unstable", or a list of issues)."""
    widths = [len(quantity_columns(model, q)) for q in quantities]
    try:
        pt = _Point(model, p, protocol)
        if model == "three_mode":
            state = tm.stability(pt.params)
            if state is not tm.Stability.STABLE:
                return [math.nan] * sum(widths), state.name.lower()
    except EOCombError as exc:
        return [math.nan] * sum(widths), _flag_for(exc)
    values, issues = [], []
    for q, w in zip(quantities, widths):
        try:
            with warnings.catch_warnings(record=True) as caught:
                warnings.simplefilter("always", RuntimeWarning)
                part = [float(x) for x in _eval_quantity(pt, q)]
            if any(issubclass(w.category, RuntimeWarning) for w in caught):
                issues.append(f"{q}:clamped")
        except (EOCombError, ArithmeticError, np.linalg.LinAlgError) as exc:
            part = [math.nan] * w
            issues.append(f"{q}:{_flag_for(exc)}")
        else:
            gaps = [c for c, x in zip(quantity_columns(model, q), part) if math.isnan(x)]
            issues += [f"{c}:undefined" for c in gaps]
        values += part
    return values, ";".join(issues) if issues else "ok"


@dataclass
class ResultTable:
    columns: list[str]
    rows: list[list]
    metadata: dict = field(default_factory=dict)

    @property
    def flags(self) -> list[str]:
        return [r[-1] for r in self.rows]

    def column(self, name: str) -> np.ndarray:
        i = self.columns.index(name)
        return np.array([r[i] for r in self.rows], dtype=float)

    def to_csv(self) -> str:
        lines = [f"# {k}: {v}" for k, v in self.metadata.items()]
        lines.append(",".join(self.columns))
        for row in self.rows:
            cells = [FLOAT_FORMAT % x for x in row[:-1]] + [row[-1]]
            lines.append(",".join(cells))
        return "\n".join(lines) + "\n"

    def to_json(self) -> str:
        def cell(x):
            if isinstance(x, str):
                return x
            return None if math.isnan(x) else float(FLOAT_FORMAT % x)

        doc = {
            "metadata": self.metadata,
            "columns": self.columns,
            "rows": [[cell(x) for x in row] for row in self.rows],
        }
        return json.dumps(doc, indent=1, sort_keys=True) + "\n"

    def render(self, fmt: str) -> str:
        return self.to_json() if fmt == "json" else self.to_csv()


def grid_points(config: RunConfig) -> list[dict]:
    axes = config.sweep
    if not axes:
        return [dict(config.parameters)]
    points = []
    for combo in itertools.product(*(a.values() for a in axes)):
        p = dict(config.parameters)
        for a, v in zip(axes, combo):
            p[a.name] = int(round(v)) if a.name == "n_pumps" else v
        points.append(p)
    return points


def _run_chunk(args):
    model, points, quantities, protocol = args
    return [evaluate_point(model, p, quantities, protocol) for p in points]


def default_jobs() -> int:
    try:
        return max(1, len(os.sched_getaffinity(0)))
    except AttributeError:
        return max(1, os.cpu_count() or 1)


def run_sweep(config: RunConfig, jobs: int | None = None) -> ResultTable:
    """Evaluate every grid point; rows come back in grid order whatever ``jobs`` is."""
    from . import __version__
    from .config import emit_config

    points = grid_points(config)
    quantities = list(config.quantities)
    jobs = default_jobs() if jobs is None else max(1, int(jobs))
    jobs = min(jobs, len(points))
    if jobs <= 1 or len(points) < 16:
        results = _run_chunk((config.model, points, quantities, config.protocol))
    else:
        bounds = np.linspace(0, len(points), jobs + 1).astype(int)
        chunks = [(config.model, points[a:b], quantities, config.protocol)
                  for a, b in zip(bounds[:-1], bounds[1:])]
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            results = [r for part in pool.map(_run_chunk, chunks) for r in part]

    axis_names = [a.name for a in config.sweep]
    columns = axis_names + [c for q in quantities for c in quantity_columns(config.model, q)] + ["flag"]
    rows = []
    for p, (values, flag) in zip(points, results):
        rows.append([float(p[n]) for n in axis_names] + values + [flag])
    flags = [r[-1] for r in rows]
    metadata = {
        "tool": f"eocomb {__version__}",
        "config": json.dumps(json.loads(emit_config(config)), sort_keys=True, separators=(",", ":")),
        "points": len(rows),
        "ok_points": sum(f == "ok" for f in flags),
        "unstable_points": sum(f in ("unstable", "at_threshold") for f in flags),
    }
    return ResultTable(columns, rows, metadata)

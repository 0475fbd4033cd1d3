import itertools
import warnings

import numpy as np
import pytest

from eocomb import comb as cb
from eocomb import protocols as pr
from eocomb import threemode as tm
from eocomb.errors import DomainError
from eocomb.overlap import cat_overlap_fidelity, gaussian_overlap_fidelity


def test_gaussian_fidelity_values():
    assert pr.teleport_fidelity_gaussian(np.sqrt(0.5), 3.0, 0.0) == 0.5
    assert pr.teleport_fidelity_gaussian(0.0, 1.0, 0.7) == 1.0
    assert pr.teleport_fidelity_gaussian(np.sqrt(0.17544), 1.0, 0.5) == pytest.approx(0.6733, abs=5e-5)


def test_gaussian_fidelity_is_monotone():
    dq = np.linspace(0, 1.2, 30)
    f = [pr.teleport_fidelity_gaussian(x, 1.0, 0.5) for x in dq]
    assert np.all(np.diff(f) < 0)
    f = [pr.teleport_fidelity_gaussian(0.6, 1.0, r) for r in np.linspace(0, 2, 30)]
    assert np.all(np.diff(f) < 0)


def test_cat_fidelity_limits():
    assert pr.teleport_fidelity_cat(0.0, 1.0, -np.pi / 2) == pytest.approx(1.0, abs=1e-12)
    assert pr.teleport_fidelity_cat(1e-6, 1.3, 0.4) == pytest.approx(1.0, abs=1e-9)
    d2 = 0.3
    assert pr.teleport_fidelity_cat(np.sqrt(d2), 1e-4, 0.0) == pytest.approx(1 / (1 + 2 * d2), abs=1e-6)
    with pytest.raises(DomainError):
        pr.teleport_fidelity_cat(0.5, 0.0, np.pi)
    with pytest.raises(DomainError):
        pr.teleport_fidelity_cat(-0.1, 1.0, 0.0)


@pytest.mark.parametrize("d2,alpha,r", list(itertools.product([0.01, 0.3, 1.0], [0.0, 2.0], [0.0, 1.0])))
def test_gaussian_fidelity_matches_overlap_oracle(d2, alpha, r):
    assert pr.teleport_fidelity_gaussian(np.sqrt(d2), alpha, r) == pytest.approx(
        gaussian_overlap_fidelity(np.sqrt(d2), alpha, r), abs=1e-6)


@pytest.mark.parametrize("d2,alpha,phi", [(0.5, 1.0, -np.pi / 2), (0.01, 2.0, 0.0), (1.0, 0.5, np.pi),
                                          (0.2, 1.0 + 0.5j, 1.0)])
def test_cat_fidelity_matches_overlap_oracle(d2, alpha, phi):
    assert pr.teleport_fidelity_cat(np.sqrt(d2), alpha, phi) == pytest.approx(
        cat_overlap_fidelity(np.sqrt(d2), alpha, phi), abs=1e-6)


def test_overlap_oracle_is_reproducible():
    assert cat_overlap_fidelity(0.6, 1.0, 0.3) == cat_overlap_fidelity(0.6, 1.0, 0.3)


def test_input_state_dispatch():
    cat = pr.InputState.cat()
    sq = pr.InputState.squeezed_coherent()
    assert pr.teleport_fidelity(cat, 0.4) == pr.teleport_fidelity_cat(0.4, 1.0, -np.pi / 2)
    assert pr.teleport_fidelity(sq, 0.4) == pr.teleport_fidelity_gaussian(0.4, 1.0, 0.5)
    with pytest.raises(DomainError):
        pr.InputState("fock")


def test_classical_fidelity_limit():
    assert pr.classical_fidelity_limit(0.0) == 0.5
    assert pr.classical_fidelity_limit(0.5) == pytest.approx(0.4434, abs=5e-5)
    assert pr.classical_fidelity_limit(40.0) < 1e-15
    assert pr.classical_fidelity_limit(0.0, "caption") == 0.5
    assert pr.classical_fidelity_limit(0.5, "caption") < pr.classical_fidelity_limit(0.5)
    # a vacuum-noise channel only beats the benchmark for unsqueezed inputs
    for r in (0.0, 0.5, 1.0):
        assert pr.teleport_fidelity_gaussian(np.sqrt(0.5), 0, r) <= pr.classical_fidelity_limit(r) + 1e-15


def test_capacities_reduce_without_entanglement():
    cap = pr.capacities_from_variances(1.0, 0.0, 2.5, 1.0)
    assert cap.dense_coding == cap.coherent_heterodyne
    spec = pr.ChannelSpec(np.sqrt(0.5), np.sqrt(0.5), 2.5, convention="variance")
    assert (spec.v_ne, spec.b) == pytest.approx((1.0, 0.0))
    assert pr.dense_coding_capacities(spec).dense_coding == pytest.approx(np.log2(3.5), rel=1e-15)
    with pytest.warns(RuntimeWarning):
        assert pr.capacities_from_variances(0.5, 0.1, 0.0).coherent_homodyne == 0.0


def test_printed_convention():
    spec = pr.ChannelSpec(0.4, 2.0, 5.0)
    assert spec.v_ne == pytest.approx(0.8)
    assert spec.b == pytest.approx(4.0 - 1 / 0.8)


def test_dense_coding_advantage_condition():
    # at eta = 1, C_dc >= C_ch exactly when 4 n (1 - V) >= (1 - V)^2 / V + b
    rng = np.random.default_rng(7)
    for _ in range(500):
        v, b, n = rng.uniform(0.05, 1.0), rng.uniform(0.0, 2.0), rng.uniform(0.0, 30.0)
        lhs, rhs = 4 * n * (1 - v), (1 - v) ** 2 / v + b
        if abs(lhs - rhs) < 1e-9:
            continue
        with warnings.catch_warnings():
            warnings.simplefilter("ignore", RuntimeWarning)
            cap = pr.capacities_from_variances(v, b, n)
        assert (cap.dense_coding >= cap.coherent_heterodyne) == (lhs >= rhs)


def test_negative_gain_is_clamped_with_warning():
    with pytest.warns(RuntimeWarning):
        cap = pr.capacities_from_variances(0.2, 5.0, 0.1)
    assert cap.dense_coding == 0.0


def test_channel_validation():
    with pytest.raises(DomainError):
        pr.capacities_from_variances(0.0, 0.0, 1.0)
    with pytest.raises(DomainError):
        pr.ChannelSpec(0.8, 0.5, 1.0)
    with pytest.raises(DomainError):
        pr.ChannelSpec(0.5, 0.8, 1.0, eta_det=1.5)
    with pytest.raises(DomainError):
        pr.ChannelSpec(0.5, 0.8, 1.0, convention="linear")


def test_more_pumps_teleport_worse():
    # fidelity of the anti-Stokes/Stokes channel at fixed C drops when the pair shares the microwave mode with more pumps
    for c in np.geomspace(0.05, 20, 15):
        f = []
        for n in (1, 4):
            cp = cb.CombParams(n, tm.ModeLoss.from_total(1.75), tm.ModeLoss.from_total(12.4), c)
            f.append(pr.teleport_fidelity_gaussian(cb.comb_squeezing(cp).minus_plus.dq_minus, 1.0, 0.5))
        assert f[1] < f[0]

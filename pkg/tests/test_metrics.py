import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from eocomb import metrics as mt
from eocomb import threemode as tm
from eocomb.errors import DomainError, UnstableSystemError
from eocomb.gaussian import CovarianceMatrix, reduce, symplectic_pair

from conftest import random_two_mode_cm, tmsv


def test_epsilon_reference_values():
    assert mt.schwarz_epsilon("pm", tm.ThreeModeParams.symmetric(0.5, 0.9)) == pytest.approx(
        np.log(2.4 / np.sqrt(5.4)), abs=1e-12)
    assert mt.schwarz_epsilon("mK", tm.ThreeModeParams.symmetric(0.0, 0.5)) == pytest.approx(
        np.log(1.5 / np.sqrt(2)), abs=1e-12)
    assert mt.schwarz_epsilon("pm", tm.ThreeModeParams.symmetric(0.5, 0.9)) == pytest.approx(0.0323, abs=5e-5)


def test_epsilon_is_symmetric_in_pair_order():
    p = tm.ThreeModeParams.symmetric(1.0, 1.2, noise=tm.MicrowaveNoise(0.3, 0.2))
    assert mt.schwarz_epsilon("mK", p) == mt.schwarz_epsilon("Km", p)


@settings(max_examples=50, deadline=None)
@given(st.floats(0.05, 6), st.floats(0.02, 0.97), st.floats(0.1, 1.0), st.floats(0.1, 1.0),
       st.floats(0, 2), st.floats(0, 2))
def test_closed_form_epsilon_matches_moments(c1, frac, eta_o, eta_w, n_ext, n_int):
    loss = tm.ModeLoss.from_total
    p = tm.ThreeModeParams(loss(1.0, eta_o), loss(2.0, eta_o), loss(3.0, eta_w), c1, frac * (1 + c1),
                           tm.MicrowaveNoise(n_ext, n_int))
    cm = tm.covariance(p)
    for pair in ("pm", "mK", "pK"):
        closed = mt.schwarz_epsilon(pair, p)
        assert closed == pytest.approx(mt.schwarz_epsilon_moments(pair, p), abs=1e-9)
        cm2 = reduce(cm, mt.pair_modes(pair))
        assert closed == pytest.approx(mt.schwarz_epsilon_from_cm(cm2), abs=1e-9)


def test_epsilon_errors():
    with pytest.raises(DomainError):
        mt.schwarz_epsilon("pm", tm.ThreeModeParams.symmetric(0.0, 0.5))
    with pytest.raises(DomainError):
        mt.schwarz_epsilon("pK", tm.ThreeModeParams(tm.ModeLoss(1, 0), tm.ModeLoss(1, 0), tm.ModeLoss(0, 1), 1, 1))
    with pytest.raises(UnstableSystemError):
        mt.schwarz_epsilon("pm", tm.ThreeModeParams.symmetric(0.5, 2.0))
    with pytest.raises(DomainError):
        mt.pair_modes("pp")
    with pytest.raises(DomainError):
        mt.schwarz_epsilon_from_cm(CovarianceMatrix.vacuum(2))


def test_coherent_information_trivial_cases():
    assert mt.coherent_information(CovarianceMatrix.vacuum(2)) == 0.0
    thermal = CovarianceMatrix(1.5 * np.eye(4))
    assert mt.coherent_information(thermal) == pytest.approx(-2.0, abs=1e-12)


def test_coherent_information_of_pure_state_is_local_entropy():
    r = 0.8
    from eocomb.gaussian import entropy_h
    assert mt.coherent_information(tmsv(r)) == pytest.approx(entropy_h(np.cosh(2 * r) / 2), rel=1e-10)


def test_log_negativity():
    assert mt.log_negativity(CovarianceMatrix.vacuum(2)) == 0.0
    assert mt.log_negativity(tmsv(1.0)) == pytest.approx(2 * np.log2(np.e), abs=1e-9)


def test_ppt_consistency(rng):
    for _ in range(50):
        cm, _ = random_two_mode_cm(rng)
        assert (mt.log_negativity(cm) > 0) == (symplectic_pair(cm).d_tilde_minus < 0.5)


def test_discord_trivial_cases():
    assert mt.discord(CovarianceMatrix.vacuum(2)) == 0.0
    product = CovarianceMatrix(np.diag([1.3, 1.3, 2.1, 2.1]))
    assert mt.discord(product) == 0.0
    assert mt.discord(product, "reverse") == 0.0


def test_discord_has_no_pole_at_unit_variance():
    v = np.diag([1.0, 1.0, 1.0, 1.0])
    v[0, 2] = v[2, 0] = 0.6
    v[1, 3] = v[3, 1] = -0.6
    assert mt.discord(CovarianceMatrix(v)) > 0


def test_discord_direction_swaps_modes():
    cm = reduce(tm.covariance(tm.ThreeModeParams.symmetric(0.5, 0.9)), [1, 0])
    swapped = reduce(cm, [1, 0])
    assert mt.discord(cm, "reverse") == pytest.approx(mt.discord(swapped, "forward"), rel=1e-12)
    assert mt.coherent_information(cm, "reverse") == pytest.approx(mt.coherent_information(swapped), rel=1e-12)
    assert mt.discord(cm) != pytest.approx(mt.discord(swapped))


def test_discord_nonnegative_on_stable_grid():
    for c1 in np.linspace(0, 6, 13):
        for c2 in np.linspace(0.01, 0.98 * (1 + c1), 12):
            cm = tm.covariance(tm.ThreeModeParams.symmetric(c1, c2))
            for pair in ([0, 1], [1, 0], [1, 2], [2, 1]):
                assert mt.discord(reduce(cm, pair)) >= 0


def test_rotation_invariance(rng):
    rot = np.kron(np.eye(2), np.array([[0.0, 1.0], [-1.0, 0.0]]))
    for _ in range(10):
        cm, _ = random_two_mode_cm(rng)
        turned = CovarianceMatrix(rot @ cm.entries @ rot.T)
        for fn in (mt.coherent_information, mt.log_negativity, mt.discord):
            assert fn(turned) == pytest.approx(fn(cm), rel=1e-9, abs=1e-12)
        assert mt.schwarz_epsilon_from_cm(turned) == pytest.approx(mt.schwarz_epsilon_from_cm(cm), rel=1e-9)


def test_optical_entanglement_grows_toward_threshold():
    c2 = np.linspace(0.05, 1.4, 40)
    ln = [mt.log_negativity(reduce(tm.covariance(tm.ThreeModeParams.symmetric(0.5, x)), [1, 0])) for x in c2]
    assert np.all(np.diff(ln) > 0)


def test_pair_metrics_per_photon_values():
    r = mt.pair_metrics(tm.ThreeModeParams.symmetric(5.0, 1.5), "mp")
    assert r.n_plus == pytest.approx(40 / 27)
    assert r.coh_info_per_photon == pytest.approx(1.089, abs=1e-3)
    assert r.log_neg_per_photon == pytest.approx(1.611, abs=1e-3)
    assert r.discord_per_photon == pytest.approx(1.763, abs=1e-3)


def test_pair_metrics_without_anti_stokes_light():
    r = mt.pair_metrics(tm.ThreeModeParams.symmetric(0.0, 0.5), "mK")
    assert r.epsilon == pytest.approx(np.log(1.5 / np.sqrt(2)))
    assert r.coh_info_per_photon is None

import json

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from scipy.integrate import simpson

from eocomb.errors import DomainError, SingularSystemError, UnphysicalStateError
from eocomb.gaussian import (
    CovarianceMatrix,
    entropy_h,
    gaussian_density,
    is_physical,
    partial_transpose,
    purity,
    reduce,
    rotated_variance,
    squeezing_ellipse,
    symplectic_eigenvalues,
    symplectic_pair,
    wigner_density,
    wigner_marginal,
)

from conftest import random_two_mode_cm, tmsv


def test_vacuum_and_json_round_trip():
    vac = CovarianceMatrix.vacuum(3)
    assert vac.mode_count == 3
    np.testing.assert_array_equal(vac.entries, 0.5 * np.eye(6))
    again = CovarianceMatrix.from_json_dict(json.loads(json.dumps(vac.to_json_dict())))
    assert again == vac


def test_rejects_bad_shapes_and_asymmetry():
    with pytest.raises(DomainError):
        CovarianceMatrix(np.eye(3))
    bad = 0.5 * np.eye(4)
    bad[0, 1] = 0.1
    with pytest.raises(DomainError):
        CovarianceMatrix(bad)


def test_entries_are_read_only():
    cm = CovarianceMatrix.vacuum(1)
    with pytest.raises(ValueError):
        cm.entries[0, 0] = 3.0


def test_reduce_orders_and_validates():
    v = np.diag([1.0, 2.0, 3.0, 4.0, 5.0, 6.0])
    sub = reduce(v, [2, 0])
    np.testing.assert_array_equal(sub.entries, np.diag([5.0, 6.0, 1.0, 2.0]))
    with pytest.raises(IndexError):
        reduce(v, [3])
    with pytest.raises(DomainError):
        reduce(v, [1, 1])


def test_partial_transpose_is_an_involution(rng):
    cm, _ = random_two_mode_cm(rng)
    np.testing.assert_allclose(partial_transpose(partial_transpose(cm, 1), 1).entries, cm.entries)


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 2**32 - 1))
def test_invariant_route_matches_eigen_route(seed):
    cm, nu = random_two_mode_cm(np.random.default_rng(seed))
    pair = symplectic_pair(cm)
    eig = symplectic_eigenvalues(cm)
    np.testing.assert_allclose([pair.d_minus, pair.d_plus], np.sort(nu), rtol=1e-8)
    np.testing.assert_allclose(eig, np.sort(nu), rtol=1e-8)
    pt = symplectic_eigenvalues(partial_transpose(cm, 1))[0]
    assert pair.d_tilde_minus == pytest.approx(pt, rel=1e-8)


def test_tmsv_spectrum():
    r = 0.7
    pair = symplectic_pair(tmsv(r))
    assert pair.d_minus == pytest.approx(0.5, abs=1e-12)
    assert pair.d_tilde_minus == pytest.approx(0.5 * np.exp(-2 * r), rel=1e-12)


def test_unphysical_state_is_rejected():
    v = np.array(tmsv(1.0).entries)
    v[0, 0] = v[1, 1] = 0.2
    assert not is_physical(v)
    with pytest.raises(UnphysicalStateError):
        symplectic_pair(v)


def test_squeezing_ellipse_matches_eigenvalues(rng):
    for _ in range(20):
        cm, _ = random_two_mode_cm(rng)
        sq = squeezing_ellipse(cm, 0, 1)
        block = cm.entries[np.ix_([0, 2], [0, 2])]
        lo, hi = np.linalg.eigvalsh(block)
        assert sq.dq_minus ** 2 == pytest.approx(lo, rel=1e-10)
        assert sq.dq_plus ** 2 == pytest.approx(hi, rel=1e-10)
        assert -90.0 < sq.theta <= 90.0
        assert rotated_variance(cm, 0, 1, sq.theta) == pytest.approx(lo, rel=1e-9, abs=1e-12)


def test_squeezing_angle_for_tmsv():
    sq = squeezing_ellipse(tmsv(0.5), 0, 1)
    # the q1 - q2 combination is squeezed for a two-mode squeezer with positive correlation
    assert sq.theta == pytest.approx(-45.0)
    assert sq.dq_minus ** 2 == pytest.approx(0.5 * np.exp(-1.0))


def test_isotropic_block_has_zero_angle():
    assert squeezing_ellipse(CovarianceMatrix.vacuum(2), 0, 1).theta == 0.0
    with pytest.raises(DomainError):
        squeezing_ellipse(CovarianceMatrix.vacuum(2), 1, 1)


def test_purity():
    assert purity(tmsv(1.2)) == pytest.approx(1.0)
    thermal = CovarianceMatrix(1.5 * np.eye(4))
    assert purity(thermal) == pytest.approx(1 / 3)


def test_entropy_h_against_fock_sum():
    x = np.cosh(2.0) / 2
    n = np.sinh(1.0) ** 2  # thermal occupation with x = n + 1/2
    k = np.arange(0, 4000)
    p = (n / (1 + n)) ** k / (1 + n)
    fock = -np.sum(p[p > 0] * np.log2(p[p > 0]))
    assert entropy_h(x) == pytest.approx(fock, rel=1e-10)
    assert entropy_h(x) == pytest.approx(2.337, abs=5e-4)
    assert entropy_h(0.5) == 0.0
    with pytest.raises(DomainError):
        entropy_h(0.3)


def test_wigner_normalisation_and_marginal():
    cm = tmsv(0.4)
    x = np.linspace(-8, 8, 321)
    q1, q2 = np.meshgrid(x, x, indexing="ij")
    marg = wigner_marginal(cm, [0, 2], np.stack([q1, q2], axis=-1))
    assert simpson(simpson(marg, x=x), x=x) == pytest.approx(1.0, abs=1e-10)
    assert wigner_density(CovarianceMatrix.vacuum(1), [0.0, 0.0]) == pytest.approx(1 / np.pi)


def test_gaussian_density_rejects_singular_covariance():
    with pytest.raises(SingularSystemError):
        gaussian_density(np.diag([1.0, 1e-14]), [0.0, 0.0])

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from qfid.errors import NotPSD, OutsideBlochBall, TraceNotOne
from qfid.qmath import I2
from qfid.states import (Axis, axial_state, bloch_to_density, density_to_bloch, make_rng,
                         maximally_mixed, sample_pure_bloch, sample_pure_uniform,
                         validate_density)

unit = st.floats(-1, 1, allow_nan=False)


def test_bloch_to_density_examples():
    np.testing.assert_array_equal(bloch_to_density([0, 0, 1]), np.diag([1, 0]))
    np.testing.assert_array_equal(bloch_to_density([0, 0, 0]), I2 / 2)
    np.testing.assert_array_equal(bloch_to_density([1, 0, 0]), np.full((2, 2), 0.5))
    with pytest.raises(OutsideBlochBall):
        bloch_to_density([1, 0.1, 0])


def test_density_to_bloch_examples():
    np.testing.assert_array_equal(density_to_bloch(I2 / 2), [0, 0, 0])
    np.testing.assert_array_equal(density_to_bloch(np.diag([1, 0])), [0, 0, 1])


@settings(max_examples=300, deadline=None)
@given(unit, unit, unit)
def test_round_trip(x, y, z):
    r = np.array([x, y, z])
    n = np.linalg.norm(r)
    if n > 1:
        r = r / n
    rho = bloch_to_density(r)
    assert np.max(np.abs(density_to_bloch(rho) - r)) <= 1e-12
    assert np.max(np.abs(bloch_to_density(density_to_bloch(rho)) - rho)) <= 1e-12


def test_axial_states():
    np.testing.assert_array_equal(axial_state("+z"), np.diag([1, 0]))
    np.testing.assert_array_equal(axial_state(Axis.MINUS_Z), np.diag([0, 1]))
    np.testing.assert_array_equal(axial_state("+y"), [[0.5, -0.5j], [0.5j, 0.5]])
    assert len(Axis) == 6
    for a in Axis:
        rho = axial_state(a)
        assert np.max(np.abs(rho @ rho - rho)) <= 1e-15
        np.testing.assert_array_equal(density_to_bloch(rho), a.vector)
    for plus, minus in zip(Axis.positive(), Axis.negative()):
        np.testing.assert_array_equal(axial_state(plus) + axial_state(minus),
                                      2 * maximally_mixed())


def test_maximally_mixed():
    np.testing.assert_array_equal(maximally_mixed(), [[0.5, 0], [0, 0.5]])
    avg = sum(axial_state(a) for a in Axis) / 6
    assert np.max(np.abs(avg - maximally_mixed())) <= 1e-15


def test_states_are_read_only():
    with pytest.raises(ValueError):
        axial_state("+x")[0, 0] = 2


def test_sample_is_pure(rng):
    for _ in range(100):
        r, rho = sample_pure_uniform(rng)
        assert abs(np.linalg.norm(r) - 1) <= 1e-12
        np.testing.assert_allclose(rho, bloch_to_density(r))


def test_single_draws_follow_batch_stream():
    batch = sample_pure_bloch(make_rng(7), 5)
    rng = make_rng(7)
    singles = np.array([sample_pure_uniform(rng)[0] for _ in range(5)])
    np.testing.assert_array_equal(batch, singles)


def test_sphere_moments():
    n = 10**6
    r = sample_pure_bloch(make_rng(99), n)
    # first moments: each component has variance 1/3
    assert np.all(np.abs(r.mean(axis=0)) <= 5 * np.sqrt(1 / 3) / np.sqrt(n))
    for j in range(3):
        for k in range(3):
            prod = r[:, j] * r[:, k]
            err = prod.std(ddof=1) / np.sqrt(n)
            assert abs(prod.mean() - (j == k) / 3) <= 5 * err


def test_validate_density():
    np.testing.assert_array_equal(validate_density(I2 / 2), I2 / 2)
    with pytest.raises(TraceNotOne) as exc:
        validate_density(np.diag([0.7, 0.4]))
    assert exc.value.residual == pytest.approx(0.1)
    with pytest.raises(NotPSD) as exc:
        validate_density(np.diag([1.2, -0.2]))
    assert exc.value.residual == pytest.approx(0.2)

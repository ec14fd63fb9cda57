import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from qfid import qmath
from qfid.channels import (AffineBlochMap, KrausChannel, UnitaryGate, apply, choi, compose,
                           is_cptp, is_unital, preset, random_cptp, random_unital,
                           random_unitary, to_affine, to_kraus)
from qfid.errors import (NotCPTP, NotTracePreserving, NotUnitary, OutsideBlochBall,
                         ParamOutOfRange, UnknownPreset)
from qfid.qmath import I2, SIGMA_X, SIGMA_Z
from qfid.states import Axis, axial_state, density_to_bloch, make_rng, maximally_mixed

from conftest import random_density, random_pure

GRID = np.linspace(0, 1, 11)
TRANSPOSE = AffineBlochMap(np.diag([1.0, -1.0, 1.0]), np.zeros(3))


def axial_affine_oracle(s):
    """Recover (m, t) from the images of the six axial states only."""
    m = np.zeros((3, 3))
    t = np.zeros(3)
    for j, (plus, minus) in enumerate(zip(Axis.positive(), Axis.negative())):
        rp = density_to_bloch(s.apply_linear(axial_state(plus)))
        rm = density_to_bloch(s.apply_linear(axial_state(minus)))
        m[:, j] = (rp - rm) / 2
        t += (rp + rm) / 6
    return m, t


def preset_grid():
    for name, key in [("depolarizing", "p"), ("amplitude_damping", "gamma"),
                      ("phase_damping", "lambda"), ("bit_flip", "q"), ("phase_flip", "q")]:
        for v in GRID:
            yield preset(name, {key: v})
    for axis in ([1, 0, 0], [0, 1, 0], [0, 0, 1], [1, 1, 1], [0.3, -0.2, 0.9]):
        for angle in np.linspace(0, 2 * np.pi, 9):
            yield preset("rotation", axis=axis, angle=angle)


def test_apply_examples(rng):
    ident = preset("identity")
    full = preset("depolarizing", p=1)
    for _ in range(10):
        rho = random_density(rng)
        np.testing.assert_allclose(apply(ident, rho), rho, atol=1e-15)
        np.testing.assert_allclose(apply(full, rho), I2 / 2, atol=1e-15)
    np.testing.assert_array_equal(apply(UnitaryGate.named("X"), np.diag([1, 0])),
                                  np.diag([0, 1]))


@pytest.mark.parametrize("alpha", [0.0, 0.3, math.pi / 2, 2.0, math.pi])
def test_z_rotation_affine(alpha):
    s = preset("rotation", axis=[0, 0, 1], angle=alpha)
    a = to_affine(s)
    c, sn = math.cos(alpha), math.sin(alpha)
    expected = np.array([[c, -sn, 0], [sn, c, 0], [0, 0, 1]])
    m, t = axial_affine_oracle(s)
    np.testing.assert_allclose(m, expected, atol=1e-14)
    np.testing.assert_allclose(a.m, m, atol=1e-14)
    np.testing.assert_allclose(a.t, t, atol=1e-14)
    np.testing.assert_allclose(a.t, 0, atol=1e-15)


@pytest.mark.parametrize("p", GRID)
def test_depolarizing_affine(p):
    a = to_affine(preset("depolarizing", p=p))
    m, t = axial_affine_oracle(preset("depolarizing", p=p))
    np.testing.assert_allclose(m, (1 - p) * np.eye(3), atol=1e-14)
    np.testing.assert_allclose(a.m, m, atol=1e-14)
    np.testing.assert_allclose(a.t, 0, atol=1e-15)


@pytest.mark.parametrize("g", GRID)
def test_amplitude_damping_affine(g):
    s = preset("amplitude_damping", gamma=g)
    a = to_affine(s)
    m, t = axial_affine_oracle(s)
    np.testing.assert_allclose(m, np.diag([math.sqrt(1 - g), math.sqrt(1 - g), 1 - g]),
                               atol=1e-14)
    np.testing.assert_allclose(t, [0, 0, g], atol=1e-14)
    np.testing.assert_allclose(a.m, m, atol=1e-14)
    np.testing.assert_allclose(a.t, t, atol=1e-14)


def test_representation_equivalence(rng):
    for i in range(1000):
        s = random_cptp(rng, 1 + i % 4)
        a = to_affine(s)
        rho = random_density(rng)
        assert np.max(np.abs(apply(s, rho) - apply(a, rho))) <= 1e-10
        assert is_unital(s) == (np.linalg.norm(a.t) <= 2e-10)


def test_choi_examples(rng):
    omega = np.zeros(4)
    omega[[0, 3]] = 1
    np.testing.assert_allclose(choi(preset("identity")), np.outer(omega, omega) / 2, atol=1e-15)
    np.testing.assert_allclose(choi(preset("depolarizing", p=1)), np.eye(4) / 4, atol=1e-15)
    for _ in range(20):
        c = choi(random_unitary(rng))
        w = qmath.jacobi_eigvalsh(c)
        assert abs(np.trace(c) - 1) <= 1e-14
        assert np.all(np.abs(w[:3]) <= 1e-10)
        assert abs(w[3] - 1) <= 1e-10


def test_choi_affine_matches_kraus(rng):
    for _ in range(50):
        s = random_cptp(rng, 3)
        np.testing.assert_allclose(choi(to_affine(s)), choi(s), atol=1e-14)


def test_cptp_and_unital_verdicts():
    for s in preset_grid():
        assert is_cptp(s)
    for p in GRID:
        assert is_unital(preset("depolarizing", p=p))
    ad = preset("amplitude_damping", gamma=0.3)
    assert is_cptp(ad)
    assert not is_unital(ad)
    np.testing.assert_allclose(to_affine(ad).t, [0, 0, 0.3], atol=1e-15)
    assert not is_cptp(TRANSPOSE)
    assert abs(TRANSPOSE.diagnostics.min_choi_eigenvalue + 0.5) <= 1e-10
    assert is_unital(TRANSPOSE)


def test_random_unital_is_unital(rng):
    for k in range(2, 5):
        s = random_unital(rng, k)
        assert is_unital(s) and is_cptp(s)


def test_compose_examples(rng):
    x = UnitaryGate.named("X")
    xx = compose(x, x)
    for a in Axis:
        assert np.max(np.abs(xx.apply_linear(axial_state(a)) - axial_state(a))) <= 1e-12
    for p, q in [(0.1, 0.2), (0.5, 0.5), (1.0, 0.3), (0.0, 0.7)]:
        pq = compose(preset("depolarizing", p=p), preset("depolarizing", p=q))
        ref = preset("depolarizing", p=p + q - p * q)
        assert len(pq.ops) <= 4
        for a in Axis:
            np.testing.assert_allclose(pq.apply_linear(axial_state(a)),
                                       ref.apply_linear(axial_state(a)), atol=1e-12)
    for _ in range(20):
        s = random_cptp(rng, 2)
        rho = random_density(rng)
        for ident in (preset("identity"), to_affine(preset("identity"))):
            np.testing.assert_allclose(apply(compose(s, ident), rho), apply(s, rho), atol=1e-12)
            np.testing.assert_allclose(apply(compose(ident, s), rho), apply(s, rho), atol=1e-12)


def test_compose_affine_matches_kraus(rng):
    for _ in range(50):
        a, b = random_cptp(rng, 2), random_cptp(rng, 3)
        k = compose(a, b)
        f = compose(to_affine(a), to_affine(b))
        assert isinstance(f, AffineBlochMap)
        rho = random_density(rng)
        np.testing.assert_allclose(apply(k, rho), apply(a, apply(b, rho)), atol=1e-12)
        np.testing.assert_allclose(apply(f, rho), apply(k, rho), atol=1e-12)


def test_preset_examples():
    s = preset("depolarizing", p=0)
    np.testing.assert_allclose(to_affine(s).m, np.eye(3), atol=1e-15)
    rz = preset("rotation", axis=[0, 0, 1], angle=math.pi)
    # a single Kraus operator proportional to sigma_z
    k = rz.ops[0]
    assert abs(abs(np.trace(k.conj().T @ SIGMA_Z)) - 2) <= 1e-15
    np.testing.assert_allclose(to_affine(rz).m, np.diag([-1, -1, 1]), atol=1e-15)
    decay = preset("amplitude_damping", gamma=1)
    for a in Axis:
        np.testing.assert_allclose(apply(decay, axial_state(a)), np.diag([1, 0]), atol=1e-15)


def test_preset_errors():
    with pytest.raises(UnknownPreset):
        preset("teleport", p=0.1)
    with pytest.raises(ParamOutOfRange):
        preset("depolarizing", p=1.5)
    with pytest.raises(ParamOutOfRange):
        preset("bit_flip", q=-0.1)
    with pytest.raises(ParamOutOfRange):
        preset("depolarizing")
    with pytest.raises(ParamOutOfRange):
        preset("depolarizing", p=0.1, gamma=0.2)
    with pytest.raises(ParamOutOfRange):
        preset("rotation", axis=[0, 0, 0], angle=1.0)


def test_kraus_validation():
    with pytest.raises(NotTracePreserving):
        KrausChannel((0.9 * I2,))
    with pytest.raises(ValueError):
        KrausChannel(tuple(0.5 * I2 for _ in range(5)))
    with pytest.raises(NotUnitary):
        UnitaryGate(np.diag([1, 2]))
    with pytest.raises(OutsideBlochBall):
        AffineBlochMap(np.eye(3), [0, 0, 0.5])


def test_to_kraus_from_affine(rng):
    np.testing.assert_allclose(
        abs(np.trace(to_kraus(to_affine(preset("identity"))).ops[0])), 2, atol=1e-12)
    for i in range(100):
        s = random_cptp(rng, 1 + i % 4)
        k = to_kraus(to_affine(s))
        assert len(k.ops) <= 4
        for a in Axis:
            np.testing.assert_allclose(k.apply_linear(axial_state(a)),
                                       s.apply_linear(axial_state(a)), atol=1e-9)
    with pytest.raises(NotCPTP):
        to_kraus(TRANSPOSE)


def test_random_cptp(rng):
    for i in range(1000):
        s = random_cptp(rng, 1 + i % 4)
        total = sum(k.conj().T @ k for k in s.ops)
        assert np.max(np.abs(total - I2)) <= 1e-12
        assert qmath.psd_check_4(choi(s))
    single = random_cptp(rng, 1)
    assert is_unital(single)
    u = single.ops[0]
    assert np.max(np.abs(u.conj().T @ u - I2)) <= 1e-12


def test_random_unitary_haar_moment():
    rng = make_rng(2001)
    n = 100_000
    vals = np.array([abs(np.trace(random_unitary(rng).u)) ** 2 for _ in range(n)])
    err = vals.std(ddof=1) / math.sqrt(n)
    assert abs(vals.mean() - 1) <= 5 * err


def test_random_unitary_properties(rng):
    for _ in range(100):
        g = random_unitary(rng)
        assert np.max(np.abs(g.u.conj().T @ g.u - I2)) <= 1e-12
        assert is_unital(g)


def test_contraction_and_trace(rng):
    for i in range(200):
        s = random_cptp(rng, 1 + i % 4)
        out = s.apply_linear(random_pure(rng))
        assert np.linalg.norm(density_to_bloch(out)) <= 1 + 1e-9
        assert abs(np.trace(out) - 1) <= 1e-10


@settings(max_examples=200, deadline=None)
@given(st.integers(0, 2**32 - 1), st.floats(0, 1))
def test_linearity(seed, alpha):
    rng = make_rng(seed)
    s = random_cptp(rng, int(rng.integers(1, 5)))
    r1, r2 = random_density(rng), random_density(rng)
    lhs = apply(s, alpha * r1 + (1 - alpha) * r2)
    rhs = alpha * apply(s, r1) + (1 - alpha) * apply(s, r2)
    assert np.max(np.abs(lhs - rhs)) <= 1e-10


def test_channels_are_immutable():
    s = preset("bit_flip", q=0.2)
    with pytest.raises(ValueError):
        s.ops[0][0, 0] = 3
    with pytest.raises(AttributeError):
        s.ops = ()


def test_maximally_mixed_fixed_by_unital_presets():
    for name, key in [("depolarizing", "p"), ("phase_damping", "lambda"), ("bit_flip", "q")]:
        out = preset(name, {key: 0.37}).apply_linear(maximally_mixed())
        np.testing.assert_allclose(out, maximally_mixed(), atol=1e-15)

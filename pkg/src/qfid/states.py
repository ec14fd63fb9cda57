"""Single-qubit states.

States are 2x2 density matrices (numpy arrays); pure states are stored as
projectors, never as kets, so global phase never appears.  Bloch vectors are
real arrays of shape ``(3,)`` with ``rho = (I + r . sigma) / 2``.

Random draws use ``numpy.random.Generator`` on the PCG64 bit generator.  A
pure state costs exactly two uniform doubles, ``u0`` giving ``z = 2 u0 - 1``
and ``u1`` giving the azimuth ``phi = 2 pi u1``.
"""
from __future__ import annotations

import enum

import numpy as np

from .errors import NotHermitian, NotPSD, OutsideBlochBall, TraceNotOne
from .qmath import I2, PAULIS, TOL_HERM, TOL_PSD, herm_residual, hermitian_eigen

TOL_TRACE = 1e-10


class Axis(enum.Enum):
    PLUS_X = "+x"
    MINUS_X = "-x"
    PLUS_Y = "+y"
    MINUS_Y = "-y"
    PLUS_Z = "+z"
    MINUS_Z = "-z"

    @property
    def sign(self) -> int:
        return 1 if self.value[0] == "+" else -1

    @property
    def index(self) -> int:
        return "xyz".index(self.value[1])

    @property
    def vector(self) -> np.ndarray:
        e = np.zeros(3)
        e[self.index] = self.sign
        return e

    @classmethod
    def positive(cls) -> tuple[Axis, Axis, Axis]:
        return cls.PLUS_X, cls.PLUS_Y, cls.PLUS_Z

    @classmethod
    def negative(cls) -> tuple[Axis, Axis, Axis]:
        return cls.MINUS_X, cls.MINUS_Y, cls.MINUS_Z


def make_rng(seed: int | None = None) -> np.random.Generator:
    """The package's random generator: PCG64 seeded with ``seed``."""
    return np.random.Generator(np.random.PCG64(seed))


def bloch_to_density(r) -> np.ndarray:
    r = np.asarray(r, dtype=float)
    norm = float(np.linalg.norm(r))
    if norm > 1 + TOL_PSD:
        raise OutsideBlochBall(f"Bloch vector has length {norm:.12g} > 1", norm - 1)
    x, y, z = r
    return 0.5 * np.array([[1 + z, x - 1j * y], [x + 1j * y, 1 - z]])


def density_to_bloch(rho) -> np.ndarray:
    return pauli_coefficients(rho)[1].real


def pauli_coefficients(x) -> tuple[complex, np.ndarray]:
    """Coefficients of an arbitrary 2x2 matrix in the basis ``sigma_j / 2``.

    Returns ``(c0, c)`` with ``x = (c0 I + c . sigma) / 2`` and
    ``c_j = Tr(x sigma_j)``; ``c`` is complex unless ``x`` is Hermitian.
    """
    x = np.asarray(x)
    c0 = x[0, 0] + x[1, 1]
    c = np.array([x[0, 1] + x[1, 0], 1j * (x[0, 1] - x[1, 0]), x[0, 0] - x[1, 1]])
    return complex(c0), c


_AXIAL = {}
for _a in Axis:
    _m = 0.5 * (I2 + _a.sign * PAULIS[_a.index])
    _m.flags.writeable = False
    _AXIAL[_a] = _m
_MIXED = 0.5 * np.array(I2)
_MIXED.flags.writeable = False


def axial_state(axis: Axis | str) -> np.ndarray:
    """Pure state pointing along ``axis``: ``(I +/- sigma_j) / 2`` (read-only)."""
    return _AXIAL[Axis(axis)]


def maximally_mixed() -> np.ndarray:
    return _MIXED


def _uniforms_to_bloch(u: np.ndarray) -> np.ndarray:
    z = 2.0 * u[..., 0] - 1.0
    phi = 2.0 * np.pi * u[..., 1]
    s = np.sqrt(np.maximum(0.0, 1.0 - z * z))
    return np.stack([s * np.cos(phi), s * np.sin(phi), z], axis=-1)


def sample_pure_bloch(rng: np.random.Generator, n: int) -> np.ndarray:
    """``n`` Bloch vectors uniform on the unit sphere, shape ``(n, 3)``."""
    return _uniforms_to_bloch(rng.random((n, 2)))


def sample_pure_uniform(rng: np.random.Generator) -> tuple[np.ndarray, np.ndarray]:
    r = _uniforms_to_bloch(rng.random(2))
    return r, bloch_to_density(r)


def validate_density(m) -> np.ndarray:
    """Return ``m`` as a density matrix or raise naming the broken invariant."""
    m = np.array(m, dtype=complex)
    if m.shape != (2, 2):
        raise ValueError(f"expected a 2x2 matrix, got shape {m.shape}")
    if not np.all(np.isfinite(m)):
        raise ValueError("matrix has non-finite entries")
    res = herm_residual(m)
    if res > TOL_HERM:
        raise NotHermitian(f"state is not Hermitian (residual {res:.3e})", res)
    tr = (m[0, 0] + m[1, 1]).real
    if abs(tr - 1) > TOL_TRACE:
        raise TraceNotOne(f"state has trace {tr:.12g} (residual {abs(tr - 1):.3e})", abs(tr - 1))
    w, _ = hermitian_eigen(m)
    if w[0] < -TOL_PSD:
        raise NotPSD(f"state has negative eigenvalue {w[0]:.3e}", float(-w[0]))
    return m


def is_pure(rho, tol: float = 1e-10) -> bool:
    rho = np.asarray(rho)
    return bool(np.max(np.abs(rho @ rho - rho)) <= tol)

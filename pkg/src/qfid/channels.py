"""Single-qubit channels.

Three concrete representations share one duck-typed interface:

* :class:`KrausChannel` -- operator sum ``S[x] = sum_i K_i x K_i^dagger``;
* :class:`AffineBlochMap` -- ``r -> m r + t`` on Bloch vectors, trace
  preserving by construction;
* :class:`UnitaryGate` -- conjugation ``x -> u x u^dagger``, also used as the
  *target* of a fidelity calculation.

Each exposes ``apply_linear(x)``, the linear extension of the map to any 2x2
matrix.  It does no validation, so the fidelity formulas can be evaluated on
positive-but-not-CP maps too; :func:`apply` is the validating entry point.
The Choi matrix is ``(id (x) S)`` of the maximally entangled projector,
normalised to unit trace.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from functools import cached_property
from typing import Union

import numpy as np

from .errors import (NotCPTP, NotTracePreserving, NotUnitary, OutsideBlochBall,
                     ParamOutOfRange, UnknownPreset)
from .qmath import (I2, PAULIS, SIGMA_X, SIGMA_Y, SIGMA_Z, TOL_PSD, as_matrix,
                    jacobi_eigh, jacobi_eigvalsh)
from .states import (Axis, make_rng, maximally_mixed, pauli_coefficients,
                     sample_pure_bloch, validate_density)

TOL_TP = 1e-10
TOL_UNITARY = 1e-10
TOL_UNITAL = 1e-10
TOL_BALL = 1e-9
# borderline band: residuals up to this multiple of a threshold only warn
BORDERLINE_FACTOR = 10.0
MAX_KRAUS = 4
KRAUS_EIG_CUTOFF = 1e-10

_E = [np.zeros((2, 2), dtype=complex) for _ in range(4)]
for _k, (_i, _j) in enumerate([(0, 0), (0, 1), (1, 0), (1, 1)]):
    _E[_k][_i, _j] = 1.0

_BALL_PROBES = np.vstack([np.array([a.vector for a in Axis]),
                          sample_pure_bloch(make_rng(20010315), 100)])


def _readonly(a, dtype) -> np.ndarray:
    a = np.array(a, dtype=dtype)
    a.flags.writeable = False
    return a


@dataclass(frozen=True)
class CPTPDiagnostics:
    tp_residual: float
    min_choi_eigenvalue: float
    unital_residual: float

    @property
    def cptp(self) -> bool:
        return self.tp_residual <= TOL_TP and self.min_choi_eigenvalue >= -TOL_PSD

    @property
    def unital(self) -> bool:
        return self.unital_residual <= TOL_UNITAL

    def warnings(self) -> list[str]:
        out = []
        if self.tp_residual > TOL_TP:
            out.append(f"borderline trace preservation (residual {self.tp_residual:.3e})")
        neg = -self.min_choi_eigenvalue
        if neg > BORDERLINE_FACTOR * TOL_PSD:
            out.append(f"channel is not completely positive "
                       f"(min Choi eigenvalue {self.min_choi_eigenvalue:.6g})")
        elif neg > TOL_PSD:
            out.append(f"borderline complete positivity "
                       f"(min Choi eigenvalue {self.min_choi_eigenvalue:.3e})")
        return out


class _ChannelBase:
    def apply_linear(self, x) -> np.ndarray:
        raise NotImplementedError

    @cached_property
    def diagnostics(self) -> CPTPDiagnostics:
        mixed = maximally_mixed()
        unital = float(np.max(np.abs(self.apply_linear(mixed) - mixed)))
        return CPTPDiagnostics(self._tp_residual(), float(jacobi_eigvalsh(choi(self))[0]),
                               unital)

    def _tp_residual(self) -> float:
        return 0.0


@dataclass(frozen=True, eq=False)
class KrausChannel(_ChannelBase):
    ops: tuple

    def __post_init__(self):
        ops = tuple(_readonly(as_matrix(k), complex) for k in self.ops)
        if not 1 <= len(ops) <= MAX_KRAUS:
            raise ValueError(f"a qubit channel takes 1 to {MAX_KRAUS} Kraus operators, "
                             f"got {len(ops)}")
        object.__setattr__(self, "ops", ops)
        res = self._tp_residual()
        if res > BORDERLINE_FACTOR * TOL_TP:
            raise NotTracePreserving(
                f"Kraus operators are not trace preserving (residual {res:.3e})", res)

    def _tp_residual(self) -> float:
        total = sum(k.conj().T @ k for k in self.ops)
        return float(np.max(np.abs(total - I2)))

    def apply_linear(self, x) -> np.ndarray:
        x = np.asarray(x)
        return sum(k @ x @ k.conj().T for k in self.ops)


@dataclass(frozen=True, eq=False)
class AffineBlochMap(_ChannelBase):
    m: np.ndarray
    t: np.ndarray

    def __post_init__(self):
        m = _readonly(self.m, float)
        t = _readonly(self.t, float)
        if m.shape != (3, 3) or t.shape != (3,):
            raise ValueError("affine map needs a 3x3 matrix and a 3-vector")
        if not (np.all(np.isfinite(m)) and np.all(np.isfinite(t))):
            raise ValueError("affine map has non-finite entries")
        object.__setattr__(self, "m", m)
        object.__setattr__(self, "t", t)
        radius = float(np.max(np.linalg.norm(_BALL_PROBES @ m.T + t, axis=1)))
        if radius > 1 + TOL_BALL:
            raise OutsideBlochBall(
                f"affine map sends a pure state outside the Bloch ball (radius {radius:.12g})",
                radius - 1)

    def apply_linear(self, x) -> np.ndarray:
        c0, c = pauli_coefficients(x)
        out = self.m @ c + c0 * self.t
        return 0.5 * (c0 * I2 + out[0] * SIGMA_X + out[1] * SIGMA_Y + out[2] * SIGMA_Z)


@dataclass(frozen=True, eq=False)
class UnitaryGate(_ChannelBase):
    u: np.ndarray

    def __post_init__(self):
        u = _readonly(as_matrix(self.u), complex)
        res = float(np.max(np.abs(u.conj().T @ u - I2)))
        if res > TOL_UNITARY:
            raise NotUnitary(f"matrix is not unitary (residual {res:.3e})", res)
        object.__setattr__(self, "u", u)

    @classmethod
    def named(cls, name: str) -> UnitaryGate:
        try:
            return cls(NAMED_GATES[name])
        except KeyError:
            raise ValueError(f"unknown gate {name!r}; expected one of "
                             f"{', '.join(NAMED_GATES)}") from None

    @classmethod
    def rotation(cls, axis, angle: float) -> UnitaryGate:
        """``exp(-i angle/2 n.sigma)``; ``axis`` is normalised here."""
        n = np.asarray(axis, dtype=float)
        norm = np.linalg.norm(n)
        if norm == 0 or not np.isfinite(norm):
            raise ParamOutOfRange("rotation axis must be a non-zero finite vector")
        n = n / norm
        ns = n[0] * SIGMA_X + n[1] * SIGMA_Y + n[2] * SIGMA_Z
        return cls(math.cos(angle / 2) * I2 - 1j * math.sin(angle / 2) * ns)

    def apply_linear(self, x) -> np.ndarray:
        return self.u @ np.asarray(x) @ self.u.conj().T

    @cached_property
    def bloch_rotation(self) -> np.ndarray:
        """SO(3) matrix ``R_jk = Tr(sigma_j u sigma_k u^dagger) / 2``."""
        return np.array([[0.5 * np.trace(pj @ self.apply_linear(pk)).real for pk in PAULIS]
                         for pj in PAULIS])

    @property
    def dagger(self) -> UnitaryGate:
        return UnitaryGate(self.u.conj().T)


NAMED_GATES = {
    "I": I2,
    "X": SIGMA_X,
    "Y": SIGMA_Y,
    "Z": SIGMA_Z,
    "H": np.array([[1, 1], [1, -1]], dtype=complex) / math.sqrt(2),
    "S": np.diag([1, 1j]),
    "T": np.diag([1, np.exp(1j * math.pi / 4)]),
}

Channel = Union[KrausChannel, AffineBlochMap, UnitaryGate]


def apply(s: Channel, rho) -> np.ndarray:
    out = s.apply_linear(validate_density(rho))
    return validate_density(out)


def to_affine(s: Channel) -> AffineBlochMap:
    """Bloch-ball form: ``m_jk = Tr(sigma_j S[sigma_k]) / 2``, ``t_j = Tr(sigma_j S[I/2])``."""
    if isinstance(s, AffineBlochMap):
        return s
    images = [s.apply_linear(p) for p in PAULIS]
    m = np.array([[0.5 * np.trace(pj @ img).real for img in images] for pj in PAULIS])
    centre = s.apply_linear(maximally_mixed())
    t = np.array([np.trace(pj @ centre).real for pj in PAULIS])
    return AffineBlochMap(m, t)


kraus_to_affine = to_affine


def choi(s: Channel) -> np.ndarray:
    return 0.5 * sum(np.kron(e, s.apply_linear(e)) for e in _E)


def _choi_of_ops(ops) -> np.ndarray:
    return 0.5 * sum(np.kron(e, sum(k @ e @ k.conj().T for k in ops)) for e in _E)


def _kraus_from_choi(c: np.ndarray) -> KrausChannel:
    w, v = jacobi_eigh(2.0 * c)
    if w[0] < -TOL_PSD:
        raise NotCPTP(f"map is not completely positive (min Choi eigenvalue {w[0] / 2:.6g})",
                      float(-w[0] / 2))
    ops = [math.sqrt(lam) * v[:, k].reshape(2, 2).T
           for k, lam in enumerate(w) if lam > KRAUS_EIG_CUTOFF]
    return KrausChannel(tuple(reversed(ops)))


def to_kraus(s: Channel) -> KrausChannel:
    """Kraus form; maps given in other forms get the minimal set from their Choi matrix."""
    if isinstance(s, KrausChannel):
        return s
    if isinstance(s, UnitaryGate):
        return KrausChannel((s.u,))
    return _kraus_from_choi(choi(s))


affine_to_kraus = to_kraus


def is_cptp(s: Channel) -> bool:
    return s.diagnostics.cptp


def is_unital(s: Channel) -> bool:
    return s.diagnostics.unital


def compose(outer: Channel, inner: Channel) -> Channel:
    """The channel ``x -> outer[inner[x]]``, in ``outer``'s representation."""
    if isinstance(outer, UnitaryGate) and isinstance(inner, UnitaryGate):
        return UnitaryGate(outer.u @ inner.u)
    if isinstance(outer, AffineBlochMap):
        a = to_affine(inner)
        return AffineBlochMap(outer.m @ a.m, outer.m @ a.t + outer.t)
    ops = [a @ b for a in to_kraus(outer).ops for b in to_kraus(inner).ops]
    if len(ops) > MAX_KRAUS:
        return _kraus_from_choi(_choi_of_ops(ops))
    return KrausChannel(tuple(ops))


def _prob(params: dict, key: str) -> float:
    if key not in params:
        raise ParamOutOfRange(f"missing parameter {key!r}")
    v = float(params[key])
    if not 0.0 <= v <= 1.0:
        raise ParamOutOfRange(f"parameter {key}={v!r} outside [0, 1]", v)
    return v


def _check_keys(params: dict, allowed: set) -> None:
    extra = set(params) - allowed
    if extra:
        raise ParamOutOfRange(f"unexpected parameter(s): {', '.join(sorted(extra))}")


def preset(name: str, params: dict | None = None, **kwargs) -> KrausChannel:
    """Standard channel families in canonical Kraus form.

    ``depolarizing(p)``, ``amplitude_damping(gamma)``, ``phase_damping(lambda)``,
    ``bit_flip(q)``, ``phase_flip(q)``, ``identity()`` and
    ``rotation(axis | nx, ny, nz, angle)``.
    """
    params = {**(params or {}), **kwargs}
    if name == "identity":
        _check_keys(params, set())
        return KrausChannel((I2,))
    if name == "depolarizing":
        _check_keys(params, {"p"})
        p = _prob(params, "p")
        a, b = math.sqrt(1 - 3 * p / 4), math.sqrt(p / 4)
        return KrausChannel((a * I2, b * SIGMA_X, b * SIGMA_Y, b * SIGMA_Z))
    if name == "amplitude_damping":
        _check_keys(params, {"gamma"})
        g = _prob(params, "gamma")
        return KrausChannel((np.diag([1, math.sqrt(1 - g)]),
                             np.array([[0, math.sqrt(g)], [0, 0]])))
    if name == "phase_damping":
        _check_keys(params, {"lambda"})
        lam = _prob(params, "lambda")
        return KrausChannel((np.diag([1, math.sqrt(1 - lam)]),
                             np.diag([0, math.sqrt(lam)])))
    if name in ("bit_flip", "phase_flip"):
        _check_keys(params, {"q"})
        q = _prob(params, "q")
        flip = SIGMA_X if name == "bit_flip" else SIGMA_Z
        return KrausChannel((math.sqrt(1 - q) * I2, math.sqrt(q) * flip))
    if name == "rotation":
        _check_keys(params, {"axis", "nx", "ny", "nz", "angle"})
        if "angle" not in params:
            raise ParamOutOfRange("missing parameter 'angle'")
        axis = params.get("axis")
        if axis is None:
            axis = [float(params.get(k, 0.0)) for k in ("nx", "ny", "nz")]
        return KrausChannel((UnitaryGate.rotation(axis, float(params["angle"])).u,))
    raise UnknownPreset(f"unknown preset {name!r}; expected one of {', '.join(PRESETS)}")


PRESETS = ("identity", "depolarizing", "amplitude_damping", "phase_damping",
           "bit_flip", "phase_flip", "rotation")


def _ginibre(rng: np.random.Generator, shape) -> np.ndarray:
    return rng.standard_normal(shape) + 1j * rng.standard_normal(shape)


def random_unitary(rng: np.random.Generator) -> UnitaryGate:
    """Haar-random unitary via QR with a positive-real triangular diagonal."""
    q, r = np.linalg.qr(_ginibre(rng, (2, 2)))
    d = np.diag(r)
    return UnitaryGate(q * (d / np.abs(d)))


def random_cptp(rng: np.random.Generator, kraus_count: int) -> KrausChannel:
    """Random channel from an isometry: orthonormal columns of a Gaussian stack."""
    if not 1 <= kraus_count <= MAX_KRAUS:
        raise ValueError(f"kraus_count must be in 1..{MAX_KRAUS}")
    q, _ = np.linalg.qr(_ginibre(rng, (2 * kraus_count, 2)))
    return KrausChannel(tuple(q[2 * i:2 * i + 2, :] for i in range(kraus_count)))


def random_unital(rng: np.random.Generator, count: int) -> KrausChannel:
    """Random mixture of ``count`` Haar unitaries (always unital)."""
    weights = rng.random(count) + 1e-3
    weights /= weights.sum()
    return KrausChannel(tuple(math.sqrt(w) * random_unitary(rng).u for w in weights))

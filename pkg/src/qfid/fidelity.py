"""State fidelity and average gate fidelity estimators.

Fidelity follows the squared convention ``F = (Tr sqrt(sqrt(r1) r2 sqrt(r1)))**2``,
which for a pure first argument is the overlap ``Tr(psi rho)``.

The average fidelity of a channel ``S`` against a target unitary ``u`` is the
uniform average over pure inputs ``psi`` of ``Tr(u psi u^dagger S[psi])``.
Since the integrand is a quadratic polynomial in the Bloch vector of ``psi``,
it can be computed exactly from a handful of inputs:

* ``six_state``: the mean over the six axial states ``+-x, +-y, +-z``;
* ``three_state_plus`` / ``three_state_minus``: three axial states of one sign
  plus a correction from ``S[I/2]`` (which vanishes for unital ``S``);
* ``pauli_trace``: ``1/2 + 1/3 sum_j Tr(u sigma_j/2 u^dagger S[sigma_j/2])``.

Two independent sphere averages serve as oracles: a 12-point product
quadrature that is exact for quadratics, and seeded Monte Carlo.
"""
from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from . import _kernel
from .channels import Channel, UnitaryGate, to_affine
from .errors import NotPure
from .qmath import PAULIS, psd_sqrt
from .states import Axis, axial_state, bloch_to_density, make_rng, maximally_mixed

METHODS = ("six_state", "three_state_plus", "three_state_minus", "pauli_trace",
           "monte_carlo", "quadrature")
TOL_PURE = 1e-10
MIN_MC_SAMPLES = 100


@dataclass(frozen=True)
class FidelityReport:
    value: float
    method: str
    std_error: float | None = None
    samples: int | None = None
    warnings: tuple[str, ...] = field(default_factory=tuple)

    def __post_init__(self):
        if self.method not in METHODS:
            raise ValueError(f"unknown method {self.method!r}")
        if (self.std_error is not None) != (self.method == "monte_carlo"):
            raise ValueError("std_error is reported for monte_carlo only")

    def as_dict(self) -> dict:
        d = {"method": self.method, "value": self.value}
        if self.std_error is not None:
            d["std_error"] = self.std_error
        if self.samples is not None:
            d["samples"] = self.samples
        d["warnings"] = list(self.warnings)
        return d


def state_fidelity(rho1, rho2) -> float:
    s = psd_sqrt(rho1)
    inner = s @ np.asarray(rho2) @ s
    inner = 0.5 * (inner + inner.conj().T)
    return float(np.trace(psd_sqrt(inner)).real ** 2)


def pure_state_fidelity(psi, rho) -> float:
    psi = np.asarray(psi)
    res = float(np.max(np.abs(psi @ psi - psi)))
    if res > TOL_PURE:
        raise NotPure(f"first argument is not a pure state (|psi^2 - psi| = {res:.3e})", res)
    return float(np.trace(psi @ np.asarray(rho)).real)


def _target(u) -> UnitaryGate:
    return u if isinstance(u, UnitaryGate) else UnitaryGate(u)


def _overlap(u: UnitaryGate, rho, image) -> float:
    """``Tr(u rho u^dagger image)``."""
    return float(np.trace(u.apply_linear(rho) @ image).real)


def _report(value: float, method: str, s: Channel, **kw) -> FidelityReport:
    return FidelityReport(float(value), method, warnings=tuple(s.diagnostics.warnings()), **kw)


def avg_fidelity_six(u, s: Channel) -> FidelityReport:
    u = _target(u)
    terms = [_overlap(u, axial_state(a), s.apply_linear(axial_state(a))) for a in Axis]
    return _report(sum(terms) / 6.0, "six_state", s)


def avg_fidelity_three(u, s: Channel, sign: str = "+") -> FidelityReport:
    """Three axial states of one sign, with the ``S[I/2]`` correction kept.

    Exact for every linear trace-preserving ``S``; for unital ``S`` the
    correction is exactly 1/2 per axis.
    """
    if sign not in ("+", "-"):
        raise ValueError("sign must be '+' or '-'")
    u = _target(u)
    axes = Axis.positive() if sign == "+" else Axis.negative()
    centre = s.apply_linear(maximally_mixed())
    total = 0.0
    for a in axes:
        rho = axial_state(a)
        total += _overlap(u, rho, s.apply_linear(rho) - centre)
    method = "three_state_plus" if sign == "+" else "three_state_minus"
    return _report(0.5 + total / 3.0, method, s)


def avg_fidelity_pauli(u, s: Channel) -> FidelityReport:
    u = _target(u)
    total = sum(_overlap(u, p / 2, s.apply_linear(p / 2)) for p in PAULIS)
    return _report(0.5 + total / 3.0, "pauli_trace", s)


# Gauss-Legendre in cos(theta) (3 nodes) x trapezoid in phi (4 nodes); exact
# for polynomials of degree <= 5 in z and <= 3 in (cos phi, sin phi).
_GL_NODES = (-math.sqrt(0.6), 0.0, math.sqrt(0.6))
_GL_WEIGHTS = (5.0 / 9.0, 8.0 / 9.0, 5.0 / 9.0)
_PHI = (0.0, 0.5 * math.pi, math.pi, 1.5 * math.pi)


def quadrature_rule() -> tuple[np.ndarray, np.ndarray]:
    """Nodes (unit vectors, shape ``(12, 3)``) and weights summing to 1."""
    pts, wts = [], []
    for z, wz in zip(_GL_NODES, _GL_WEIGHTS):
        s = math.sqrt(1.0 - z * z)
        for phi in _PHI:
            pts.append((s * math.cos(phi), s * math.sin(phi), z))
            wts.append(0.5 * wz / len(_PHI))
    return np.array(pts), np.array(wts)


def sphere_average_quadrature(func) -> float:
    """Uniform-measure average of ``func(r)`` over the unit sphere."""
    pts, wts = quadrature_rule()
    return float(sum(w * func(r) for r, w in zip(pts, wts)))


def avg_fidelity_quadrature(u, s: Channel) -> FidelityReport:
    u = _target(u)

    def integrand(r):
        psi = bloch_to_density(r)
        return _overlap(u, psi, s.apply_linear(psi))

    return _report(sphere_average_quadrature(integrand), "quadrature", s)


def _split(n: int, workers: int) -> list[int]:
    base, extra = divmod(n, workers)
    return [base + (i < extra) for i in range(workers)]


def mc_fidelity_values(u, s: Channel, n: int, seed: int, workers: int = 1) -> np.ndarray:
    """Per-sample integrand values for Monte Carlo, in stream order.

    Worker ``i`` draws its share of the ``n`` samples from a PCG64 stream
    seeded with ``seed + i``; shares are concatenated in worker order.
    """
    u = _target(u)
    a = to_affine(s) if not isinstance(s, UnitaryGate) else None
    m, t = (a.m, a.t) if a is not None else (s.bloch_rotation, np.zeros(3))
    rot = u.bloch_rotation

    def run(i, count):
        return _kernel.mc_values(rot, m, t, make_rng(seed + i).random((count, 2)))

    counts = _split(n, workers)
    if workers == 1:
        return run(0, n)
    with ThreadPoolExecutor(max_workers=workers) as pool:
        parts = list(pool.map(run, range(workers), counts))
    return np.concatenate(parts)


def mean_and_std_error(values: np.ndarray) -> tuple[float, float]:
    """Sample mean and ``std / sqrt(n)`` (ddof 1), both via fixed-order pairwise sums."""
    n = len(values)
    mean = _kernel.pairwise_sum(values) / n
    dev = np.asarray(values) - mean
    var = _kernel.pairwise_sum(dev * dev) / (n - 1)
    return mean, math.sqrt(var / n)


def avg_fidelity_mc(u, s: Channel, n: int = 100_000, seed: int = 0,
                    workers: int = 1) -> FidelityReport:
    if n < MIN_MC_SAMPLES:
        raise ValueError(f"need at least {MIN_MC_SAMPLES} samples, got {n}")
    if workers < 1:
        raise ValueError("workers must be >= 1")
    values = mc_fidelity_values(u, s, n, seed, workers)
    mean, err = mean_and_std_error(values)
    return _report(mean, "monte_carlo", s, std_error=err, samples=n)


ESTIMATORS = {
    "six_state": avg_fidelity_six,
    "three_state_plus": lambda u, s: avg_fidelity_three(u, s, "+"),
    "three_state_minus": lambda u, s: avg_fidelity_three(u, s, "-"),
    "pauli_trace": avg_fidelity_pauli,
    "quadrature": avg_fidelity_quadrature,
}


def average_fidelity(u, s: Channel, method: str = "six_state", **kwargs) -> FidelityReport:
    if method == "monte_carlo":
        return avg_fidelity_mc(u, s, **kwargs)
    try:
        return ESTIMATORS[method](u, s)
    except KeyError:
        raise ValueError(f"unknown method {method!r}; expected one of {', '.join(METHODS)}") \
            from None

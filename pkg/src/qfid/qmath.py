"""Fixed-size linear algebra for qubit numerics.

Matrices are plain numpy arrays: complex 2x2 for states, unitaries and Kraus
operators, real 3x3 for Bloch-ball maps and complex 4x4 for Choi matrices.
Only the handful of operations the rest of the package needs live here, with
closed forms where they exist.
"""
from __future__ import annotations

import numpy as np

from .errors import NotHermitian, NotPSD

TOL_HERM = 1e-10
TOL_PSD = 1e-9
TOL_RECON = 1e-12
# eigenvalues below this fraction of the largest are roundoff; sqrt would amplify them
EIG_RANK_CUTOFF = 1e-15
JACOBI_OFFDIAG = 1e-12
JACOBI_MAX_SWEEPS = 50


def _frozen(a) -> np.ndarray:
    a = np.array(a, dtype=complex)
    a.flags.writeable = False
    return a


I2 = _frozen([[1, 0], [0, 1]])
SIGMA_X = _frozen([[0, 1], [1, 0]])
SIGMA_Y = _frozen([[0, -1j], [1j, 0]])
SIGMA_Z = _frozen([[1, 0], [0, -1]])
PAULIS = (SIGMA_X, SIGMA_Y, SIGMA_Z)


def as_matrix(a, shape=(2, 2)) -> np.ndarray:
    m = np.asarray(a, dtype=complex)
    if m.shape != shape:
        raise ValueError(f"expected a {shape} matrix, got shape {m.shape}")
    if not np.all(np.isfinite(m)):
        raise ValueError("matrix has non-finite entries")
    return m


def mat_mul(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    return np.asarray(a) @ np.asarray(b)


def dagger(a: np.ndarray) -> np.ndarray:
    return np.asarray(a).conj().T


def trace(a: np.ndarray) -> complex:
    a = np.asarray(a)
    return complex(a[0, 0] + a[1, 1])


def herm_residual(h: np.ndarray) -> float:
    h = np.asarray(h)
    return float(np.max(np.abs(h - h.conj().T)))


def _require_hermitian(h: np.ndarray) -> None:
    res = herm_residual(h)
    if res > TOL_HERM:
        raise NotHermitian(f"matrix is not Hermitian (residual {res:.3e})", res)


def hermitian_eigen(h: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Closed-form eigendecomposition of a 2x2 Hermitian matrix.

    Returns ``(w, v)`` with eigenvalues ``w`` ascending and the matching
    orthonormal eigenvectors as the columns of ``v``, so that
    ``h == v @ diag(w) @ v^dagger``.

    The eigenvalues are ``mean -/+ radius`` of the traceless part.  The upper
    eigenvector is taken from whichever row of ``h - w_hi`` is better
    conditioned and the lower one is its exact orthogonal complement.
    """
    h = np.asarray(h, dtype=complex)
    _require_hermitian(h)
    scale = float(np.max(np.abs(h)))
    if scale == 0.0:
        return np.zeros(2), np.eye(2, dtype=complex)
    # exact power-of-two rescaling so tiny or huge entries cannot under/overflow
    e = int(np.frexp(scale)[1])
    w, v = _eigen_unit(np.ldexp(h.real, -e) + 1j * np.ldexp(h.imag, -e))
    return np.ldexp(w, e), v


def _eigen_unit(h: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    a = h[0, 0].real
    d = h[1, 1].real
    b = 0.5 * (h[0, 1] + np.conj(h[1, 0]))
    mean = 0.5 * (a + d)
    half = 0.5 * (a - d)
    radius = float(np.hypot(half, abs(b)))
    w = np.array([mean - radius, mean + radius])
    if radius == 0.0:
        return w, np.eye(2, dtype=complex)
    # (h - w_hi) v = 0 for v = (b, w_hi - a) or v = (w_hi - d, conj(b))
    if half >= 0:
        hi = np.array([half + radius, np.conj(b)])
    else:
        hi = np.array([b, radius - half])
    e = int(np.frexp(np.max(np.abs(hi)))[1])
    hi = np.ldexp(hi.real, -e) + 1j * np.ldexp(hi.imag, -e)
    hi = hi / np.linalg.norm(hi)
    lo = np.array([-np.conj(hi[1]), np.conj(hi[0])])
    return w, np.column_stack([lo, hi])


def psd_sqrt(p: np.ndarray) -> np.ndarray:
    """Principal square root of a 2x2 positive semidefinite matrix.

    Eigenvalues down to ``-TOL_PSD`` are clamped to zero; anything more
    negative raises :class:`NotPSD`.  Eigenvalues within ``EIG_RANK_CUTOFF``
    of zero relative to the largest one are also zeroed, so a rank-1 input
    gives an exactly rank-1 root instead of picking up ``sqrt(eps)`` noise.
    """
    w, v = hermitian_eigen(p)
    if w[0] < -TOL_PSD:
        raise NotPSD(f"matrix has negative eigenvalue {w[0]:.3e}", float(-w[0]))
    w = np.where(w <= EIG_RANK_CUTOFF * np.max(np.abs(w)), 0.0, w)
    s = np.sqrt(w)
    return (v * s) @ v.conj().T


def jacobi_eigh(c: np.ndarray, vectors: bool = True) -> tuple[np.ndarray, np.ndarray | None]:
    """Eigendecomposition of a small Hermitian matrix by cyclic Jacobi sweeps.

    Each pair ``(p, q)`` is first rotated by a phase so that the off-diagonal
    entry is real, then annihilated with the classical real rotation.  Sweeps
    stop once the Frobenius norm of the off-diagonal part is at most
    ``JACOBI_OFFDIAG``.  Eigenvalues are returned ascending.
    """
    a = np.array(c, dtype=complex)
    _require_hermitian(a)
    a = 0.5 * (a + a.conj().T)
    n = a.shape[0]
    v = np.eye(n, dtype=complex) if vectors else None
    offdiag = ~np.eye(n, dtype=bool)
    for _ in range(JACOBI_MAX_SWEEPS):
        if np.linalg.norm(a[offdiag]) <= JACOBI_OFFDIAG:
            break
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = a[p, q]
                mag = abs(apq)
                if mag < 1e-300:
                    continue
                phase = apq / mag
                tau = (a[q, q].real - a[p, p].real) / (2.0 * mag)
                if tau == 0.0:
                    t = 1.0
                else:
                    t = np.copysign(1.0, tau) / (abs(tau) + np.hypot(1.0, tau))
                cs = 1.0 / np.hypot(1.0, t)
                sn = t * cs
                # j = diag(1, conj(phase)) @ [[cs, sn], [-sn, cs]] on the (p, q) plane
                j00, j01 = cs, sn
                j10, j11 = -sn * np.conj(phase), cs * np.conj(phase)
                col_p = a[:, p].copy()
                col_q = a[:, q].copy()
                a[:, p] = col_p * j00 + col_q * j10
                a[:, q] = col_p * j01 + col_q * j11
                row_p = a[p, :].copy()
                row_q = a[q, :].copy()
                a[p, :] = np.conj(j00) * row_p + np.conj(j10) * row_q
                a[q, :] = np.conj(j01) * row_p + np.conj(j11) * row_q
                a[p, q] = a[q, p] = 0.0
                if v is not None:
                    vp = v[:, p].copy()
                    vq = v[:, q].copy()
                    v[:, p] = vp * j00 + vq * j10
                    v[:, q] = vp * j01 + vq * j11
    else:
        raise RuntimeError("Jacobi iteration did not converge")
    w = np.diag(a).real
    order = np.argsort(w, kind="stable")
    return w[order], (v[:, order] if v is not None else None)


def jacobi_eigvalsh(c: np.ndarray) -> np.ndarray:
    return jacobi_eigh(c, vectors=False)[0]


def psd_check_4(c: np.ndarray) -> bool:
    """True iff the 4x4 Hermitian matrix has no eigenvalue below ``-TOL_PSD``."""
    c = as_matrix(c, (4, 4))
    return bool(jacobi_eigvalsh(c)[0] >= -TOL_PSD)

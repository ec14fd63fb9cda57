"""Pure numpy implementations of the Monte Carlo kernels.

Reference twin of ``_ckernels.pyx``; both must produce the same numbers for
the same inputs (``pairwise_sum`` bit for bit).
"""
import numpy as np

BACKEND = "numpy"


def mc_values(rot, m, t, uniforms):
    """Per-sample fidelity ``(1 + (rot r) . (m r + t)) / 2`` on the sphere.

    ``uniforms`` has shape ``(n, 2)``; row ``i`` maps to the unit vector with
    ``z = 2 u0 - 1`` and azimuth ``2 pi u1``.
    """
    rot = np.ascontiguousarray(rot, dtype=np.float64)
    m = np.ascontiguousarray(m, dtype=np.float64)
    t = np.ascontiguousarray(t, dtype=np.float64)
    u = np.ascontiguousarray(uniforms, dtype=np.float64)
    z = 2.0 * u[:, 0] - 1.0
    phi = 2.0 * np.pi * u[:, 1]
    s = np.sqrt(np.maximum(0.0, 1.0 - z * z))
    x = s * np.cos(phi)
    y = s * np.sin(phi)
    ideal = [rot[k, 0] * x + rot[k, 1] * y + rot[k, 2] * z for k in range(3)]
    actual = [m[k, 0] * x + m[k, 1] * y + m[k, 2] * z + t[k] for k in range(3)]
    dot = ideal[0] * actual[0] + ideal[1] * actual[1] + ideal[2] * actual[2]
    return 0.5 * (1.0 + dot)


def pairwise_sum(values):
    """Sum by repeated adjacent-pair reduction (fixed order, odd tail carried)."""
    a = np.array(values, dtype=np.float64)
    if a.size == 0:
        return 0.0
    while a.size > 1:
        h = a.size // 2
        nxt = a[0:2 * h:2] + a[1:2 * h:2]
        if a.size % 2:
            nxt = np.append(nxt, a[-1])
        a = nxt
    return float(a[0])

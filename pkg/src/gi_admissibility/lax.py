"""The x- and t-parts of the Lax pair, broadcasting over sample arrays.

All builders return arrays of shape ``(..., 2, 2)`` where ``...`` is the
broadcast shape of the inputs.
"""
from __future__ import annotations

import numpy as np


def _mat(a, b, c, d):
    a, b, c, d = np.broadcast_arrays(*(np.asarray(v, dtype=complex) for v in (a, b, c, d)))
    out = np.empty(a.shape + (2, 2), dtype=complex)
    out[..., 0, 0], out[..., 0, 1], out[..., 1, 0], out[..., 1, 1] = a, b, c, d
    return out


def lax_U(q, k):
    """``U = -(i/2)|q|^2 sigma3 + k Q`` with ``Q = [[0, q], [conj q, 0]]``."""
    q = np.asarray(q, dtype=complex)
    d = -0.5j * np.abs(q) ** 2
    return _mat(d, k * q, k * np.conj(q), -d)


def lax_V(q, qx, k):
    """t-part matrix built from ``q`` and ``q_x`` at spectral parameter ``k``."""
    q = np.asarray(q, dtype=complex)
    qx = np.asarray(qx, dtype=complex)
    m2 = np.abs(q) ** 2
    d = -1j * k**2 * m2 + 0.5 * (qx * np.conj(q) - q * np.conj(qx)) + 0.25j * m2**2
    # -i k Q_x sigma3 = [[0, i k q_x], [-i k conj(q_x), 0]]
    off12 = 2 * k**3 * q + 1j * k * qx
    off21 = 2 * k**3 * np.conj(q) - 1j * k * np.conj(qx)
    return _mat(d, off12, off21, -d)


def background_V(alpha: float, omega: float, c: complex, t, k):
    """``V`` evaluated on the boundary background ``q = alpha e^{i omega t}``, ``q_x = c e^{i omega t}``."""
    ph = np.exp(1j * omega * np.asarray(t, dtype=float))
    return lax_V(alpha * ph, c * ph, k)

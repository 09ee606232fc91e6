"""Explicit solutions: the GI soliton, the DNLS soliton family, the plane wave and the gauge map.

Profiles are immutable and vectorised: ``evaluate(x, t)`` and
``evaluate_x(x, t)`` broadcast over numpy arrays.
"""
from __future__ import annotations

import csv
import enum
import math
from dataclasses import dataclass, field
from typing import Callable

import numpy as np
from scipy.integrate import quad

from .errors import DomainError, TailError
from .params import ParameterTriple


class ProfileKind(str, enum.Enum):
    GI_SOLITON = "GI_SOLITON"
    DNLS_SOLITON = "DNLS_SOLITON"
    PLANE_WAVE = "PLANE_WAVE"
    GAUGE_IMAGE = "GAUGE_IMAGE"
    SCALED = "SCALED"
    ZERO = "ZERO"


class GaugeDirection(str, enum.Enum):
    DNLS_TO_GI = "DNLS_TO_GI"
    GI_TO_DNLS = "GI_TO_DNLS"


@dataclass(frozen=True)
class SolutionProfile:
    evaluate: Callable
    evaluate_x: Callable
    kind: ProfileKind
    omega: float | None = None
    schwartz: bool = True
    decay_rate: float | None = None  # exponential rate of |q|^2 as x -> infinity
    meta: dict = field(default_factory=dict)

    def __call__(self, x, t):
        return self.evaluate(x, t)

    def boundary_triple(self) -> ParameterTriple:
        """``(alpha, omega, c)`` read off from ``q(0, 0)`` and ``q_x(0, 0)`` (time-periodic profiles)."""
        if self.omega is None:
            raise DomainError("profile has no boundary frequency")
        q0 = complex(self.evaluate(0.0, 0.0))
        if abs(q0.imag) > 1e-12 * max(1.0, abs(q0)) or q0.real <= 0:
            raise DomainError(f"q(0,0) = {q0} is not real positive")
        return ParameterTriple(q0.real, self.omega, complex(self.evaluate_x(0.0, 0.0)))

    def scaled(self, factor: float) -> "SolutionProfile":
        """``factor * q``; used to build deliberately wrong inputs for the verifiers."""
        return SolutionProfile(lambda x, t: factor * self.evaluate(x, t),
                               lambda x, t: factor * self.evaluate_x(x, t),
                               ProfileKind.SCALED, self.omega, self.schwartz, self.decay_rate,
                               {"base": self.kind.value, "factor": factor})


def zero_profile() -> SolutionProfile:
    def f(x, t):
        return np.zeros(np.broadcast(np.asarray(x), np.asarray(t)).shape, dtype=complex)
    return SolutionProfile(f, f, ProfileKind.ZERO, None, True, None)


def gi_soliton(omega: float) -> SolutionProfile:
    """``q = phi(x) e^{-i arctan(tanh(sqrt(omega) x))} e^{i omega t}``, ``phi^2 = 4 sqrt(omega)/cosh(2 sqrt(omega) x)``."""
    if not omega > 0:
        raise DomainError(f"soliton needs omega > 0, got {omega}")
    s = math.sqrt(omega)
    amp = 2.0 * omega**0.25

    def q(x, t):
        x = np.asarray(x, dtype=float)
        t = np.asarray(t, dtype=float)
        phi = amp / np.sqrt(np.cosh(2 * s * x))
        return phi * np.exp(-1j * np.arctan(np.tanh(s * x)) + 1j * omega * t)

    def qx(x, t):
        x = np.asarray(x, dtype=float)
        return q(x, t) * (-s * np.tanh(2 * s * x) - 1j * s / np.cosh(2 * s * x))

    return SolutionProfile(q, qx, ProfileKind.GI_SOLITON, omega, True, 2 * s)


def soliton_phase_integral(omega: float, x):
    """``int_x^inf phi_omega^2 dy = pi - 4 arctan(tanh(sqrt(omega) x))``."""
    return math.pi - 4.0 * np.arctan(np.tanh(math.sqrt(omega) * np.asarray(x, dtype=float)))


def _dnls_amplitude_sq(omega: float, d: float):
    g = math.sqrt(4 * omega - d * d)
    shift = d / (2 * math.sqrt(omega))
    num = (4 * omega - d * d) / math.sqrt(omega)

    def phi2(s):
        return num / (np.cosh(g * np.asarray(s, dtype=float)) - shift)

    def dlog_phi(s):
        s = np.asarray(s, dtype=float)
        return -0.5 * g * np.sinh(g * s) / (np.cosh(g * s) - shift)

    return phi2, dlog_phi, g


def _tail_integral(f2: Callable[[np.ndarray], np.ndarray], x: np.ndarray, window: float,
                   tol: float = 1e-12) -> np.ndarray:
    """``int_x^inf f2`` for sorted-or-not ``x``: adaptive panels plus a fitted exponential tail."""
    x = np.asarray(x, dtype=float)
    flat = x.ravel()
    if flat.size == 0:
        return np.zeros_like(x)
    order = np.argsort(flat)
    xs = flat[order]
    x_end = xs[-1] + window
    f_a, f_b = float(f2(x_end)), float(f2(x_end + 1.0))
    f_c = float(f2(x_end + 2.0))
    if f_a == 0.0:
        tail = 0.0
    else:
        if not (0 < f_b < f_a) or f_b == 0:
            raise TailError("integrand does not decay; no exponential tail can be fitted")
        rate = math.log(f_a / f_b)
        pred = f_b * math.exp(-rate)
        if abs(f_c - pred) > 1e-3 * abs(pred) + 1e-300:
            raise TailError(f"tail fit residual {abs(f_c - pred) / pred:.2e} too large")
        tail = f_a / rate
    out = np.empty_like(xs)
    acc = tail + quad(lambda y: float(f2(y)), xs[-1], x_end, epsabs=tol, epsrel=1e-13, limit=400)[0]
    out[-1] = acc
    for i in range(len(xs) - 2, -1, -1):
        if xs[i] != xs[i + 1]:
            acc += quad(lambda y: float(f2(y)), xs[i], xs[i + 1], epsabs=tol, epsrel=1e-13, limit=200)[0]
        out[i] = acc
    res = np.empty_like(flat)
    res[order] = out
    return res.reshape(x.shape)


def dnls_soliton(omega: float, d: float = 0.0) -> SolutionProfile:
    """Two-parameter DNLS soliton ``u_{omega,d}``; the phase integral uses quadrature unless ``d = 0``."""
    if not omega > d * d / 4:
        raise DomainError(f"need omega > d^2/4, got omega={omega}, d={d}")
    phi2, dlog_phi, g = _dnls_amplitude_sq(omega, d)
    window = 40.0 / math.sqrt(omega)

    def integral(s):
        if d == 0.0:
            return soliton_phase_integral(omega, s)
        return _tail_integral(phi2, s, window)

    def u(x, t):
        x, t = np.broadcast_arrays(np.asarray(x, dtype=float), np.asarray(t, dtype=float))
        s = x + d * t
        phase = omega * t - 0.5 * d * s - 0.75 * integral(s)
        return np.sqrt(phi2(s)) * np.exp(1j * phase)

    def ux(x, t):
        x, t = np.broadcast_arrays(np.asarray(x, dtype=float), np.asarray(t, dtype=float))
        s = x + d * t
        return u(x, t) * (dlog_phi(s) - 0.5j * d + 0.75j * phi2(s))

    return SolutionProfile(u, ux, ProfileKind.DNLS_SOLITON, omega, True, g,
                           {"d": d, "phase_integral": integral})


def gauge_transform(profile: SolutionProfile, direction=GaugeDirection.DNLS_TO_GI,
                    window: float | None = None) -> SolutionProfile:
    """Gauge map between DNLS and GI solutions; both directions preserve the modulus.

    ``DNLS_TO_GI`` multiplies by ``exp(+i int_x^inf |u|^2)`` and ``GI_TO_DNLS``
    by ``exp(-i int_x^inf |q|^2)``; this is the pairing under which the
    DNLS soliton maps onto the GI soliton (up to the constant ``e^{i pi/4}``).
    """
    direction = GaugeDirection(direction)
    sign = 1.0 if direction is GaugeDirection.DNLS_TO_GI else -1.0
    rate = profile.decay_rate
    if window is None:
        window = 40.0 / (0.5 * rate) if rate else 40.0

    # a gauge image has the modulus of its source, so |q|^2 never needs the phase
    abs2 = profile.meta.get("abs2") or (lambda y, t: np.abs(profile.evaluate(y, t)) ** 2)

    def integral(x, t):
        x, t = np.broadcast_arrays(np.asarray(x, dtype=float), np.asarray(t, dtype=float))
        out = np.empty(x.shape)
        for tv in np.unique(t):
            sel = t == tv
            out[sel] = _tail_integral(lambda y: abs2(y, tv), x[sel], window)
        return out

    def q(x, t):
        return profile.evaluate(x, t) * np.exp(sign * 1j * integral(x, t))

    def qx(x, t):
        v = profile.evaluate(x, t)
        # d/dx int_x^inf |v|^2 = -|v|^2
        return (profile.evaluate_x(x, t) - sign * 1j * np.abs(v) ** 2 * v) * np.exp(
            sign * 1j * integral(x, t))

    return SolutionProfile(q, qx, ProfileKind.GAUGE_IMAGE, profile.omega, profile.schwartz,
                           rate, {"direction": direction.value, "source": profile.kind.value,
                                 "abs2": abs2})


def rotate(profile: SolutionProfile, angle: float) -> SolutionProfile:
    """``e^{i angle} q``; GI and DNLS are both invariant under constant phases."""
    ph = complex(math.cos(angle), math.sin(angle))
    return SolutionProfile(lambda x, t: ph * profile.evaluate(x, t),
                           lambda x, t: ph * profile.evaluate_x(x, t),
                           profile.kind, profile.omega, profile.schwartz, profile.decay_rate,
                           dict(profile.meta, rotation=angle))


def plane_wave(alpha: float, b: float) -> SolutionProfile:
    """``alpha e^{i omega t + i b x}`` with ``omega = alpha^4/2 - b^2 + alpha^2 b``; not decaying."""
    if not alpha > 0:
        raise DomainError(f"alpha must be positive, got {alpha}")
    omega = alpha**4 / 2 - b * b + alpha**2 * b

    def q(x, t):
        return alpha * np.exp(1j * (omega * np.asarray(t, dtype=float) + b * np.asarray(x, dtype=float)))

    def qx(x, t):
        return 1j * b * q(x, t)

    return SolutionProfile(q, qx, ProfileKind.PLANE_WAVE, omega, False, None,
                           {"alpha": alpha, "b": b})


def export_profile_csv(profile: SolutionProfile, xs, ts, path) -> None:
    """Write ``x, t, Re q, Im q`` rows for every grid pair."""
    xs = np.asarray(xs, dtype=float)
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["x", "t", "re_q", "im_q"])
        for t in np.asarray(ts, dtype=float):
            vals = profile.evaluate(xs, t)
            for x, v in zip(xs, np.atleast_1d(vals)):
                w.writerow([repr(float(x)), repr(float(t)), repr(float(v.real)), repr(float(v.imag))])

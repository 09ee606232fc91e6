"""Boundary-parameter triples, their spectral invariants and the algebraic classifier.

Everything here is plain arithmetic on ``(alpha, omega, c)``; no geometry.  The
geometric cross-check lives in :mod:`gi_admissibility.regions`.
"""
from __future__ import annotations

import cmath
import enum
import math
from dataclasses import dataclass, field
from fractions import Fraction

from .errors import AmbiguousCase, DomainError

DEFAULT_TOL = 1e-9

SQRT6 = math.sqrt(6.0)

FAMILY_A = "a"
FAMILY_A_ISOLATED = "a-isolated"
FAMILY_B_FIRST = "b-first"
FAMILY_B_SECOND = "b-second"
FAMILIES = (FAMILY_A, FAMILY_A_ISOLATED, FAMILY_B_FIRST, FAMILY_B_SECOND)


@dataclass(frozen=True)
class ParameterTriple:
    """Boundary data ``q(0,t) ~ alpha e^{i omega t}``, ``q_x(0,t) ~ c e^{i omega t}``."""

    alpha: float
    omega: float
    c: complex

    def __post_init__(self):
        object.__setattr__(self, "alpha", float(self.alpha))
        object.__setattr__(self, "omega", float(self.omega))
        object.__setattr__(self, "c", complex(self.c))
        if not (math.isfinite(self.alpha) and math.isfinite(self.omega)
                and cmath.isfinite(self.c)):
            raise DomainError("triple entries must be finite")
        if self.alpha <= 0:
            raise DomainError(f"alpha must be positive, got {self.alpha}")

    @property
    def scale(self) -> float:
        """Magnitude of the degree-6 terms mixed in X2; all tolerances are relative to it."""
        a = self.alpha
        return max(1.0, a**6, abs(self.omega) * a**2, abs(self.c) ** 2)

    def as_dict(self) -> dict:
        return {"alpha": self.alpha, "omega": self.omega,
                "c": [self.c.real, self.c.imag]}


@dataclass(frozen=True)
class SpectralInvariants:
    """Coefficients of ``Omega^2 = 4k^8 + x1 k^4 + x2 k^2 + x3`` and derived scalars."""

    x1: float
    x2: float
    x3: float
    disc: float
    kappa_plus: complex
    kappa_minus: complex
    omega: float
    b: float | None = None

    @property
    def disc_scale(self) -> float:
        return max(1.0, self.x1**2, 16.0 * abs(self.x3))

    def as_dict(self) -> dict:
        def cx(z):
            return None if z is None else [float(complex(z).real), float(complex(z).imag)]
        return {"x1": self.x1, "x2": self.x2, "x3": self.x3, "disc": self.disc,
                "kappa_plus": cx(self.kappa_plus), "kappa_minus": cx(self.kappa_minus),
                "omega": self.omega, "b": self.b}

    def poly_k(self) -> list[float]:
        """Coefficients of Omega^2 as a polynomial in k, highest degree first."""
        return [4.0, 0.0, 0.0, 0.0, self.x1, 0.0, self.x2, 0.0, self.x3]

    def poly_m(self) -> list[float]:
        """Coefficients of Omega^2 as a quartic in m = k^2, highest degree first."""
        return [4.0, 0.0, self.x1, self.x2, self.x3]


def derive_invariants(triple: ParameterTriple, tol: float = DEFAULT_TOL) -> SpectralInvariants:
    a, w, c = triple.alpha, triple.omega, triple.c
    im_c = c.imag
    x1 = 2.0 * w
    x2 = -(a**6 - 2.0 * a**2 * w + 2.0 * abs(c) ** 2 + 4.0 * a**3 * im_c) / 2.0
    x3 = (a**4 + 4.0 * a * im_c - 2.0 * w) ** 2 / 16.0
    disc = x1 * x1 - 16.0 * x3
    root = cmath.sqrt(disc)
    kp = (-x1 + root) / 8.0
    km = (-x1 - root) / 8.0
    b = None
    if c == 0 or abs(c.real) <= tol * abs(c):
        b = im_c / a
    return SpectralInvariants(x1, x2, x3, disc, kp, km, w, b)


def exact_invariants(triple: ParameterTriple) -> tuple[Fraction, Fraction, Fraction, Fraction]:
    """``(x1, x2, x3, disc)`` recomputed in exact rational arithmetic from the float inputs."""
    a = Fraction(triple.alpha)
    w = Fraction(triple.omega)
    re, im = Fraction(triple.c.real), Fraction(triple.c.imag)
    abs_c2 = re * re + im * im
    x1 = 2 * w
    x2 = -(a**6 - 2 * a**2 * w + 2 * abs_c2 + 4 * a**3 * im) / 2
    x3 = (a**4 + 4 * a * im - 2 * w) ** 2 / 16
    return x1, x2, x3, x1 * x1 - 16 * x3


class CaseLabel(str, enum.Enum):
    SOLITON_DISC_ZERO = "SOLITON_DISC_ZERO"
    SOLITON_DISC_NEG_X1_POS = "SOLITON_DISC_NEG_X1_POS"
    SOLITON_DISC_POS_X1_POS = "SOLITON_DISC_POS_X1_POS"
    SOLITON_DISC_POS_X1_NONPOS = "SOLITON_DISC_POS_X1_NONPOS"
    SOLITON_DISC_NEG_X1_NEG = "SOLITON_DISC_NEG_X1_NEG"
    SOLITON_DISC_NEG_X1_ZERO = "SOLITON_DISC_NEG_X1_ZERO"
    PW_B_LOW = "PW_B_LOW"
    PW_B_MID = "PW_B_MID"
    PW_B_HIGH = "PW_B_HIGH"
    OUTSIDE_SCOPE = "OUTSIDE_SCOPE"

    @property
    def is_soliton(self) -> bool:
        return self.value.startswith("SOLITON")

    @property
    def is_plane_wave(self) -> bool:
        return self.value.startswith("PW")


ADMISSIBLE_CASES = frozenset(
    {CaseLabel.SOLITON_DISC_ZERO, CaseLabel.PW_B_LOW, CaseLabel.PW_B_HIGH})
EMPTY_CASES = frozenset({CaseLabel.SOLITON_DISC_POS_X1_NONPOS})

_WITNESS = {
    CaseLabel.SOLITON_DISC_NEG_X1_POS:
        "disc<0, X1>0: each cut joining zeroes across a diagonal runs along Im Omega=0 inside closure(D1)",
    CaseLabel.SOLITON_DISC_POS_X1_POS:
        "disc>0, X1>0: cuts can follow the diagonal rays where Omega is real, inside closure(D1)",
    CaseLabel.SOLITON_DISC_NEG_X1_NEG:
        "disc<0, X1<0: each cut joining zeroes across an axis runs along Im Omega=0 inside closure(D1)",
    CaseLabel.SOLITON_DISC_NEG_X1_ZERO:
        "X1=X2=0, X3>0: cuts can follow the segments from 0 to the zeroes, inside closure(D1)",
    CaseLabel.PW_B_MID:
        "-alpha^2/2 < b < (2+sqrt6) alpha^2: cuts can follow the curves Im Omega=0 leaving each branch point",
    CaseLabel.OUTSIDE_SCOPE:
        "triple satisfies neither the soliton nor the plane-wave constraint",
}


@dataclass(frozen=True)
class Verdict:
    case_label: CaseLabel
    admissible_candidate: bool
    family_ids: tuple[str, ...] = ()
    witness: str | None = None
    invariants: SpectralInvariants | None = field(default=None, compare=False)

    def as_dict(self) -> dict:
        return {"case_label": self.case_label.value,
                "admissible_candidate": self.admissible_candidate,
                "family_ids": list(self.family_ids),
                "witness": self.witness,
                "invariants": None if self.invariants is None else self.invariants.as_dict()}


def soliton_constraint_residual(triple: ParameterTriple) -> float:
    """Left side of ``alpha^6 - 2 alpha^2 omega + 2|c|^2 + 4 alpha^3 Im c = 0`` (= -2 X2)."""
    a, w, c = triple.alpha, triple.omega, triple.c
    return a**6 - 2.0 * a**2 * w + 2.0 * abs(c) ** 2 + 4.0 * a**3 * c.imag


def plane_wave_constraint_residuals(triple: ParameterTriple) -> tuple[float, float]:
    """``(Re c, Im(c)^2 + alpha^2 omega - alpha^6/2 - alpha^3 Im c)``; both vanish on plane waves."""
    a, w, c = triple.alpha, triple.omega, triple.c
    return c.real, c.imag**2 + a**2 * w - a**6 / 2.0 - a**3 * c.imag


def satisfies_soliton_constraint(triple: ParameterTriple, tol: float = DEFAULT_TOL) -> bool:
    return abs(soliton_constraint_residual(triple)) <= 2.0 * tol * triple.scale


def satisfies_plane_wave_constraint(triple: ParameterTriple, tol: float = DEFAULT_TOL) -> bool:
    re_c, eq = plane_wave_constraint_residuals(triple)
    return (abs(re_c) <= tol * max(1.0, abs(triple.c))
            and abs(eq) <= tol * triple.scale)


def plane_wave_thresholds(alpha: float) -> tuple[float, float]:
    """Band edges on ``b``: ``(-alpha^2/2, (2+sqrt6) alpha^2)``."""
    return -alpha**2 / 2.0, (2.0 + SQRT6) * alpha**2


def _classify_soliton(triple: ParameterTriple, inv: SpectralInvariants, tol: float) -> CaseLabel:
    x1_tol = tol * math.sqrt(inv.disc_scale)
    if abs(inv.disc) <= tol * inv.disc_scale:
        return CaseLabel.SOLITON_DISC_ZERO
    if inv.disc > 0:
        if inv.x1 > x1_tol:
            return CaseLabel.SOLITON_DISC_POS_X1_POS
        # disc > 0 forces X1 > 0 when X2 = 0 exactly; landing here means X2 is only
        # approximately zero and the inputs sit at a corner the classification does not cover.
        x1e, x2e, _, disce = exact_invariants(triple)
        if x2e == 0 and disce > 0:
            assert x1e > 0
            return CaseLabel.SOLITON_DISC_POS_X1_POS
        raise AmbiguousCase(
            f"disc={inv.disc:.3e} > 0 with X1={inv.x1:.3e} <= 0 only because X2={inv.x2:.3e} "
            "is not exactly zero; tighten tol or use exact input")
    if abs(inv.x1) <= x1_tol:
        return CaseLabel.SOLITON_DISC_NEG_X1_ZERO
    return CaseLabel.SOLITON_DISC_NEG_X1_POS if inv.x1 > 0 else CaseLabel.SOLITON_DISC_NEG_X1_NEG


def _classify_plane_wave(triple: ParameterTriple, tol: float) -> CaseLabel:
    a = triple.alpha
    b = triple.c.imag / a
    lo, hi = plane_wave_thresholds(a)
    band = tol * max(1.0, a**2, abs(b))
    # At b = lo the triple also satisfies the soliton constraint and is caught earlier,
    # so only the upper edge can produce a genuine tie here.
    for edge in (lo, hi):
        if abs(b - edge) <= band:
            raise AmbiguousCase(
                f"b={b!r} is within {band:.1e} of the band edge {edge!r}; the two sides "
                "disagree on admissibility")
    if b < lo:
        return CaseLabel.PW_B_LOW
    if b > hi:
        return CaseLabel.PW_B_HIGH
    return CaseLabel.PW_B_MID


def classify(triple: ParameterTriple, tol: float = DEFAULT_TOL) -> Verdict:
    """Sort a triple into one of the cases of the soliton / plane-wave analysis.

    Soliton-constraint triples (``X2 = 0``) are split on the signs of the
    discriminant ``X1^2 - 16 X3`` and of ``X1``; plane-wave triples on the
    position of ``b = Im(c)/alpha`` relative to ``-alpha^2/2`` and
    ``(2 + sqrt 6) alpha^2``.  Anything else is ``OUTSIDE_SCOPE``.

    Raises
    ------
    AmbiguousCase
        If the triple is within ``tol`` of a threshold separating an admissible
        case from an inadmissible one.
    """
    if tol <= 0:
        raise DomainError("tol must be positive")
    inv = derive_invariants(triple, tol)
    if abs(inv.x2) <= tol * triple.scale:
        label = _classify_soliton(triple, inv, tol)
    elif satisfies_plane_wave_constraint(triple, tol):
        label = _classify_plane_wave(triple, tol)
    else:
        label = CaseLabel.OUTSIDE_SCOPE
    admissible = label in ADMISSIBLE_CASES
    families = tuple(family_membership(triple, tol)) if admissible else ()
    witness = None if admissible else _WITNESS.get(label, label.value)
    return Verdict(label, admissible, families, witness, inv)


def family_membership(triple: ParameterTriple, tol: float = DEFAULT_TOL) -> list[str]:
    """All explicit potentially-admissible families containing the triple (within ``tol``)."""
    if tol <= 0:
        raise DomainError("tol must be positive")
    a, w, c = triple.alpha, triple.omega, triple.c
    a3, a4 = a**3, a**4
    tol_w = tol * max(1.0, a4, abs(w))
    tol_c = tol * max(1.0, a3, abs(c))
    out = []
    # c = +-alpha sqrt(omega - alpha^4/16) - alpha^3/4 i, omega >= alpha^4/16
    if (w >= a4 / 16.0 - tol_w and abs(c.imag + a3 / 4.0) <= tol_c
            and abs(c.real**2 - a**2 * (w - a4 / 16.0)) <= tol * triple.scale):
        out.append(FAMILY_A)
    if abs(w + a4 / 4.0) <= tol_w and abs(c + 0.5j * a3) <= tol_c:
        out.append(FAMILY_A_ISOLATED)
    root = math.sqrt(max(0.0, 0.75 * a4 - w))
    if w <= -a4 / 4.0 + tol_w and abs(c - 1j * a * (a**2 / 2.0 - root)) <= tol_c:
        out.append(FAMILY_B_FIRST)
    if (w <= -(6.0 * SQRT6 + 15.0) * a4 / 2.0 + tol_w
            and abs(c - 1j * a * (a**2 / 2.0 + root)) <= tol_c):
        out.append(FAMILY_B_SECOND)
    return out


def soliton_parameters(omega: float) -> ParameterTriple:
    """Boundary triple ``(2 omega^{1/4}, omega, -2 omega^{3/4} i)`` of the stationary GI soliton."""
    if not omega > 0:
        raise DomainError(f"soliton frequency must be positive, got {omega}")
    return ParameterTriple(2.0 * omega**0.25, omega, -2j * omega**0.75)


def plane_wave_triple(alpha: float, b: float) -> ParameterTriple:
    """Triple of the plane wave ``alpha e^{i omega t + i b x}`` with its dispersion relation."""
    return ParameterTriple(alpha, alpha**4 / 2.0 - b * b + alpha**2 * b, 1j * alpha * b)


def soliton_constraint_triple(alpha: float, c: complex) -> ParameterTriple:
    """The unique ``omega`` making ``(alpha, omega, c)`` satisfy ``X2 = 0``."""
    c = complex(c)
    w = (alpha**6 + 2.0 * abs(c) ** 2 + 4.0 * alpha**3 * c.imag) / (2.0 * alpha**2)
    return ParameterTriple(alpha, w, c)

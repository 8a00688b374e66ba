"""Normal form of the three-zone system, continuity checks and equilibrium
classification.

The plane is split by the vertical lines L- = {x=-1} and L+ = {x=1} into
three closed zones R-, R_o, R+.  Six scalars (a11, a1, b2, d2, c11, f2)
determine one linear field per zone; the three fields glue continuously
along both lines.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np

from .errors import DegenerateZone, NonFocusZone

L_MINUS_X = -1.0
L_PLUS_X = 1.0


class ZoneId(enum.Enum):
    MINUS = "minus"
    CENTRAL = "central"
    PLUS = "plus"


class Locality(enum.Enum):
    REAL = "real"
    VIRTUAL = "virtual"
    ON_BOUNDARY = "on_boundary"


class Table1Case(enum.Enum):
    B2_LESS_MINUS1 = "b2 < -1"
    B2_EQ_MINUS1 = "b2 = -1"
    ABS_B2_LESS_1 = "|b2| < 1"
    B2_EQ_1 = "b2 = 1"
    B2_GREATER_1 = "b2 > 1"


@dataclass(frozen=True)
class CanonicalParams:
    """The six scalars of the normal form.

    a11: upper-left entry of the left-zone matrix
    a1:  trace of the central-zone matrix
    b2:  second entry of the central-zone offset
    d2:  second entry of the left-zone offset
    c11: upper-left entry of the right-zone matrix
    f2:  second entry of the right-zone offset
    """

    a11: float
    a1: float
    b2: float
    d2: float
    c11: float
    f2: float

    def matrices(self):
        """The three (A, B) pairs, left to right."""
        a11, a1, b2, d2, c11, f2 = (self.a11, self.a1, self.b2,
                                    self.d2, self.c11, self.f2)
        A_m = np.array([[a11, -1.0], [1.0 - b2 + d2, a1]])
        B_m = np.array([a11, d2])
        A_o = np.array([[0.0, -1.0], [1.0, a1]])
        B_o = np.array([0.0, b2])
        A_p = np.array([[c11, -1.0], [1.0 + b2 - f2, a1]])
        B_p = np.array([-c11, f2])
        return (A_m, B_m), (A_o, B_o), (A_p, B_p)

    def matrix(self, zone: ZoneId):
        pairs = self.matrices()
        return pairs[(ZoneId.MINUS, ZoneId.CENTRAL, ZoneId.PLUS).index(zone)]

    def field(self, x: float, y: float) -> tuple[float, float]:
        """Piecewise field value; zones keyed on x."""
        A, B = self.matrix(zone_of_point(x))
        return (A[0, 0] * x + A[0, 1] * y + B[0],
                A[1, 0] * x + A[1, 1] * y + B[1])

    def mirrored(self) -> "CanonicalParams":
        """Parameters of the 180-degree rotated system.

        The rotation (x, y) -> (-x, -y) swaps the outer zones and maps the
        b2 > 1 configurations onto b2 < -1 ones while preserving the normal
        form.
        """
        return CanonicalParams(a11=self.c11, a1=self.a1, b2=-self.b2,
                               d2=-self.f2, c11=self.a11, f2=-self.d2)


@dataclass(frozen=True)
class ZoneSpectrum:
    """Trace/determinant/spiral data of one zone plus its equilibrium."""

    zone: ZoneId
    t: float
    d: float
    alpha: float
    beta: float | None      # sqrt(4d - t^2)/2 when eigenvalues are complex
    gamma: float | None     # alpha/beta, same condition
    equilibrium: tuple[float, float]
    locality: Locality

    @property
    def is_focus_or_center(self) -> bool:
        return self.beta is not None


@dataclass(frozen=True)
class ContactData:
    """Contact points of the field with the switching lines."""

    p_minus: tuple[float, float]
    p_plus: tuple[float, float]
    pdot_minus: tuple[float, float]
    pdot_plus: tuple[float, float]

    @classmethod
    def from_params(cls, params: CanonicalParams) -> "ContactData":
        return cls(p_minus=(-1.0, 0.0), p_plus=(1.0, 0.0),
                   pdot_minus=(0.0, params.b2 - 1.0),
                   pdot_plus=(0.0, params.b2 + 1.0))


@dataclass(frozen=True)
class HypothesisReport:
    """Whether the standing hypotheses hold for a parameter set.

    h1: the central zone hosts a focus.
    h2: the outer equilibria are a center plus a focus of stability
        opposite to the central focus.
    """

    h1: bool
    h2: bool
    table1_case: Table1Case
    center_zone: ZoneId | None = None


def zone_of_point(x: float) -> ZoneId:
    if x < L_MINUS_X:
        return ZoneId.MINUS
    if x > L_PLUS_X:
        return ZoneId.PLUS
    return ZoneId.CENTRAL


def table1_case(b2: float) -> Table1Case:
    if b2 < -1.0:
        return Table1Case.B2_LESS_MINUS1
    if b2 == -1.0:
        return Table1Case.B2_EQ_MINUS1
    if b2 < 1.0:
        return Table1Case.ABS_B2_LESS_1
    if b2 == 1.0:
        return Table1Case.B2_EQ_1
    return Table1Case.B2_GREATER_1


def build_system(params: CanonicalParams):
    """The three (matrix, vector) pairs of the normal form."""
    return params.matrices()


def continuity_defect(params: CanonicalParams, n: int = 100,
                      y_max: float = 1e3, rng=None) -> float:
    """Max field mismatch across both switching lines at sampled heights.

    Products are accumulated in extended precision so the reported defect
    reflects the construction, not float64 summation order.
    """
    if rng is None:
        ys = np.linspace(-y_max, y_max, n)
    else:
        ys = rng.uniform(-y_max, y_max, size=n)
    (A_m, B_m), (A_o, B_o), (A_p, B_p) = params.matrices()
    worst = 0.0
    for x, (Aa, Ba), (Ab, Bb) in ((L_MINUS_X, (A_m, B_m), (A_o, B_o)),
                                  (L_PLUS_X, (A_o, B_o), (A_p, B_p))):
        Aa = Aa.astype(np.longdouble)
        Ab = Ab.astype(np.longdouble)
        Ba = Ba.astype(np.longdouble)
        Bb = Bb.astype(np.longdouble)
        for y in ys:
            p = np.array([x, y], dtype=np.longdouble)
            diff = (Aa @ p + Ba) - (Ab @ p + Bb)
            worst = max(worst, float(np.max(np.abs(diff))))
    return worst


def _equilibrium(A: np.ndarray, B: np.ndarray, zone: ZoneId) -> tuple[float, float]:
    det = A[0, 0] * A[1, 1] - A[0, 1] * A[1, 0]
    if det == 0.0:
        raise DegenerateZone(f"zone {zone.value}: det A = 0, no equilibrium")
    x = (-A[1, 1] * B[0] + A[0, 1] * B[1]) / det
    y = (A[1, 0] * B[0] - A[0, 0] * B[1]) / det
    return (x, y)


def _locality(zone: ZoneId, eq: tuple[float, float], tol: float = 0.0) -> Locality:
    x = eq[0]
    if zone is ZoneId.MINUS:
        if x == L_MINUS_X:
            return Locality.ON_BOUNDARY
        return Locality.REAL if x < L_MINUS_X else Locality.VIRTUAL
    if zone is ZoneId.PLUS:
        if x == L_PLUS_X:
            return Locality.ON_BOUNDARY
        return Locality.REAL if x > L_PLUS_X else Locality.VIRTUAL
    if x == L_MINUS_X or x == L_PLUS_X:
        return Locality.ON_BOUNDARY
    return Locality.REAL if L_MINUS_X < x < L_PLUS_X else Locality.VIRTUAL


def zone_spectrum(params: CanonicalParams, zone: ZoneId,
                  require_focus: bool = False) -> ZoneSpectrum:
    A, B = params.matrix(zone)
    t = float(A[0, 0] + A[1, 1])
    d = float(A[0, 0] * A[1, 1] - A[0, 1] * A[1, 0])
    disc = 4.0 * d - t * t
    if d == 0.0:
        raise DegenerateZone(f"zone {zone.value}: det A = 0, no equilibrium")
    if require_focus and disc <= 0.0:
        raise NonFocusZone(
            f"zone {zone.value}: 4d - t^2 = {disc:g} <= 0, eigenvalues are real")
    beta = math.sqrt(disc) / 2.0 if disc > 0.0 else None
    gamma = (t / 2.0) / beta if beta else None
    eq = _equilibrium(A, B, zone)
    return ZoneSpectrum(zone=zone, t=t, d=d, alpha=t / 2.0, beta=beta,
                        gamma=gamma, equilibrium=eq, locality=_locality(zone, eq))


def classify_equilibria(params: CanonicalParams):
    """Per-zone spectra with real/virtual tags, plus the hypothesis report.

    Requires every zone to host a focus or center: the real/virtual table
    is only meaningful for positive determinants.  Raises DegenerateZone or
    NonFocusZone otherwise.
    """
    spectra = [zone_spectrum(params, z, require_focus=True)
               for z in (ZoneId.MINUS, ZoneId.CENTRAL, ZoneId.PLUS)]
    return spectra, check_hypotheses(params)


def check_hypotheses(params: CanonicalParams) -> HypothesisReport:
    """Evaluate (H1)/(H2).  Total: violations are reported, never raised."""

    def spec_or_none(zone):
        try:
            return zone_spectrum(params, zone)
        except DegenerateZone:
            return None

    s_m = spec_or_none(ZoneId.MINUS)
    s_o = spec_or_none(ZoneId.CENTRAL)
    s_p = spec_or_none(ZoneId.PLUS)
    case = table1_case(params.b2)

    h1 = bool(s_o and s_o.is_focus_or_center and s_o.t != 0.0)
    h2 = False
    center_zone = None
    if h1 and s_m and s_p and s_m.is_focus_or_center and s_p.is_focus_or_center:
        for center, focus in ((s_m, s_p), (s_p, s_m)):
            if center.t == 0.0 and focus.t != 0.0 and focus.t * s_o.t < 0.0:
                h2 = True
                center_zone = center.zone
                break
    return HypothesisReport(h1=h1, h2=h2, table1_case=case, center_zone=center_zone)

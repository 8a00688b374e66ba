"""Series expansions of the boundary displacement data near b2 = -1, the
resulting sign classification, and the two-parameter family builder.

All expansions are in powers of (b2 + 1) and are expressed through the
central-zone crossing angles tau_o, taubar_o of the orbit through (-1, 0)
and the right-zone data restricted to b2 = -1 (written d+*, beta+*,
gamma+* below).
"""

from __future__ import annotations

import enum
import math
import warnings
from dataclasses import dataclass

from .errors import InconclusiveSign, InvalidFamily, NonFocusZone
from .model import CanonicalParams

EXTRAPOLATION_GATE = 0.2    # |b2 + 1| beyond this is flagged as extrapolation


class ExpansionTarget(enum.Enum):
    PI_O_0 = "pi_o(0) ordinate"
    PI_BAR_O_INV_0 = "pibar_o^-1(0) ordinate"
    PI_PLUS_INV_BAR_0 = "pi_+^-1 . pibar_o^-1(0) ordinate"
    DISPLACEMENT_0 = "displacement ordinate at the contact orbit"


class SignClass(enum.Enum):
    AO_STAR_GREATER = "a_o* - a_o^+ > 0"
    AO_STAR_LESS = "a_o* - a_o^+ < 0"
    ZERO = "a_o* - a_o^+ = 0"


@dataclass(frozen=True)
class Starred:
    """Quantities frozen at b2 = -1 entering the expansions."""

    alpha_o: float
    beta_o: float
    gamma_o: float
    tau_o: float
    tau_bar_o: float
    t_plus: float
    alpha_plus: float
    d_plus: float       # d+ restricted to b2 = -1
    beta_plus: float    # beta+ restricted to b2 = -1
    gamma_plus: float   # gamma+ restricted to b2 = -1


@dataclass(frozen=True)
class ExpansionCoeffs:
    """Coefficients of c0 + c1 (b2+1) + c2 (b2+1)^2 for one target."""

    target: ExpansionTarget
    c0: float
    c1: float
    c2: float | None
    tau_o: float
    tau_bar_o: float
    starred: Starred | None = None

    def evaluate(self, b2: float) -> float:
        u = b2 + 1.0
        val = self.c0 + self.c1 * u
        if self.c2 is not None:
            val += self.c2 * u * u
        return val


def starred_quantities(params: CanonicalParams) -> Starred:
    """Spectral data with the explicit b2-dependence frozen at b2 = -1."""
    a1 = params.a1
    disc_o = 4.0 - a1 * a1
    if disc_o <= 0.0:
        raise NonFocusZone("central zone needs 4 - a1^2 > 0")
    alpha_o = a1 / 2.0
    beta_o = math.sqrt(disc_o) / 2.0
    gamma_o = a1 / math.sqrt(disc_o)
    tau_o = math.acos(alpha_o)          # alpha_o > 0 -> (0, pi/2), else (pi/2, pi)
    tau_bar_o = math.pi - tau_o
    t_plus = params.c11 + params.a1
    d_plus = params.c11 * params.a1 - params.f2
    disc_p = 4.0 * d_plus - t_plus * t_plus
    if disc_p <= 0.0:
        raise NonFocusZone("right zone at b2 = -1 needs 4 d+* - t+^2 > 0")
    return Starred(alpha_o=alpha_o, beta_o=beta_o, gamma_o=gamma_o,
                   tau_o=tau_o, tau_bar_o=tau_bar_o,
                   t_plus=t_plus, alpha_plus=t_plus / 2.0, d_plus=d_plus,
                   beta_plus=math.sqrt(disc_p) / 2.0,
                   gamma_plus=t_plus / math.sqrt(disc_p))


def expand_pi_o_0(params: CanonicalParams) -> ExpansionCoeffs:
    """Ordinate of the central-zone image of the contact point, forward."""
    st = starred_quantities(params)
    e = math.exp(st.gamma_o * st.tau_o)
    return ExpansionCoeffs(target=ExpansionTarget.PI_O_0,
                           c0=-2.0 * e,
                           c1=-2.0 * st.alpha_o + e,
                           c2=0.25 / e,
                           tau_o=st.tau_o, tau_bar_o=st.tau_bar_o, starred=st)


def expand_pi_bar_o_inv_0(params: CanonicalParams) -> ExpansionCoeffs:
    """Ordinate of the central-zone image of the contact point, backward."""
    st = starred_quantities(params)
    e = math.exp(-st.gamma_o * st.tau_bar_o)
    return ExpansionCoeffs(target=ExpansionTarget.PI_BAR_O_INV_0,
                           c0=2.0 * e,
                           c1=-(2.0 * st.alpha_o + e),
                           c2=-0.25 / e,
                           tau_o=st.tau_o, tau_bar_o=st.tau_bar_o, starred=st)


def expand_pi_plus_inv_bar(params: CanonicalParams) -> ExpansionCoeffs:
    """Ordinate of the backward right-zone image of the pibar_o^-1(0) point."""
    st = starred_quantities(params)
    go, tbo = st.gamma_o, st.tau_bar_o
    ap, dp, bp, gp = st.alpha_plus, st.d_plus, st.beta_plus, st.gamma_plus
    ao = st.alpha_o
    G = math.exp(go * tbo)
    E = math.exp(gp * math.pi)
    lead = 1.0 / (G * E)
    c0 = -2.0 * lead
    c1 = lead * (2.0 * G * (ao - ap / dp)
                 + (1.0 - math.pi * gp / bp ** 2)) - 2.0 * ap / dp
    bracket = (dp * bp ** 6 * G * G * (dp + E * E - 1.0)
               + 4.0 * ap * bp ** 3 * G
               * (math.pi * dp * (ao * dp - ap) + 2.0 * bp ** 3 * (E + 1.0))
               + math.pi * dp * dp * ap
               * (2.0 * bp ** 3 - math.pi * ap + 3.0 * bp))
    c2 = lead * bracket / (4.0 * dp * dp * bp ** 6)
    return ExpansionCoeffs(target=ExpansionTarget.PI_PLUS_INV_BAR_0,
                           c0=c0, c1=c1, c2=c2,
                           tau_o=st.tau_o, tau_bar_o=tbo, starred=st)


def displacement_expansion(params: CanonicalParams) -> ExpansionCoeffs:
    """First-order expansion of the ordinate displacement at the contact
    orbit; sign decides how the annulus breaks."""
    st = starred_quantities(params)
    go, gp = st.gamma_o, st.gamma_plus
    tp, to = st.t_plus, params.a1
    dp, bp = st.d_plus, st.beta_plus
    S = math.exp((go + gp) * math.pi)
    c0 = 2.0 * math.exp(-(go * st.tau_bar_o + gp * math.pi)) * (1.0 - S)
    c1 = (1.0 / S) * (math.exp(go * st.tau_o)
                      * (math.pi * tp / (2.0 * bp ** 3) + S - 1.0)
                      + (tp / dp - to) * (S + math.exp(go * math.pi)))
    # the displacement coefficients must equal the difference of the two
    # one-sided expansions, term by term
    eo = expand_pi_o_0(params)
    eb = expand_pi_plus_inv_bar(params)
    for mine, diff in ((c0, eo.c0 - eb.c0), (c1, eo.c1 - eb.c1)):
        if not math.isclose(mine, diff, rel_tol=1e-9, abs_tol=1e-12):
            raise AssertionError(
                f"displacement coefficient identity violated: {mine!r} vs {diff!r}")
    return ExpansionCoeffs(target=ExpansionTarget.DISPLACEMENT_0,
                           c0=c0, c1=c1, c2=None,
                           tau_o=st.tau_o, tau_bar_o=st.tau_bar_o, starred=st)


def classify_sign(params: CanonicalParams,
                  gate: float = EXTRAPOLATION_GATE) -> SignClass:
    """Sign of a_o* - a_o^+ near b2 = -1, from the displacement expansion.

    Keyed on sign(gamma_o + gamma+*), then on the first-order term when the
    leading one vanishes.  A positive displacement ordinate means
    a_o* - a_o^+ < 0 (the section parameter flips orientation across
    b2 = -1).
    """
    b2 = params.b2
    if abs(b2 + 1.0) > gate:
        warnings.warn(
            f"|b2+1| = {abs(b2 + 1.0):.3g} exceeds the asymptotic gate "
            f"{gate:g}; classification is an extrapolation", stacklevel=2)
    st = starred_quantities(params)
    ssum = st.gamma_o + st.gamma_plus
    tol = 1e-12 * max(1.0, abs(st.gamma_o), abs(st.gamma_plus))
    if ssum > tol:
        return SignClass.AO_STAR_GREATER
    if ssum < -tol:
        return SignClass.AO_STAR_LESS
    if b2 == -1.0:
        return SignClass.ZERO
    t_o = params.a1
    B = (math.exp(st.gamma_o * st.tau_o) * math.pi * st.t_plus
         / (2.0 * st.beta_plus ** 3)
         + (st.t_plus / st.d_plus - t_o) * (1.0 + math.exp(st.gamma_o * math.pi)))
    val = B * (b2 + 1.0)
    if val == 0.0:
        raise InconclusiveSign(
            "constant and first-order displacement terms both vanish")
    return SignClass.AO_STAR_LESS if val > 0.0 else SignClass.AO_STAR_GREATER


@dataclass(frozen=True)
class FamilySpec:
    """Two-parameter family tuned so that (b2, epsilon) = (-1, 0) is the
    center configuration: f2 is slaved to epsilon."""

    a1: float
    c11: float
    a11: float
    d2: float
    epsilon: float
    b2: float

    @property
    def f2(self) -> float:
        return (self.a1 * self.c11
                - ((self.c11 + self.a1) / self.a1) ** 2 - self.epsilon)

    def validate(self) -> None:
        if self.a1 == 0.0:
            raise InvalidFamily("a1 must be nonzero (central focus)")
        if self.a1 * (self.c11 + self.a1) >= 0.0:
            raise InvalidFamily("a1*(c11 + a1) < 0 violated "
                                "(opposite-stability foci)")
        if 4.0 - self.a1 ** 2 <= 0.0:
            raise InvalidFamily("4 - a1^2 > 0 violated (central focus)")
        if self.a11 != -self.a1:
            raise InvalidFamily("a11 = -a1 violated (left-zone center)")
        if 1.0 - self.a1 ** 2 - self.b2 + self.d2 <= 0.0:
            raise InvalidFamily("1 - a1^2 - b2 + d2 > 0 violated "
                                "(left-zone center)")

    def to_params(self) -> CanonicalParams:
        self.validate()
        return CanonicalParams(a11=self.a11, a1=self.a1, b2=self.b2,
                               d2=self.d2, c11=self.c11, f2=self.f2)

    def gamma_plus_closed_form(self) -> float:
        """Spiral ratio of the right zone from the family coupling."""
        k = 4.0 * self.a1 ** 2 / (self.c11 + self.a1) ** 2
        rad = 4.0 - self.a1 ** 2 + k * (self.b2 + 1.0 + self.epsilon)
        if rad <= 0.0:
            raise InvalidFamily("right zone loses its focus: "
                                "4 - a1^2 + k (b2+1+eps) <= 0")
        return -self.a1 / math.sqrt(rad)


def build_family(a1: float, c11: float, a11: float, d2: float,
                 epsilon: float, b2: float) -> CanonicalParams:
    """Canonical parameters of the family point; validates the constraints."""
    return FamilySpec(a1=a1, c11=c11, a11=a11, d2=d2,
                      epsilon=epsilon, b2=b2).to_params()

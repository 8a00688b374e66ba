"""Poincare half-maps in the transversal-section parameterizations.

Sections on the switching lines are parameterized through the contact
points: a point of L-^O is p- - c*pdot-, of L-^I is p- + d*pdot-, of L+^O
is p+ - b*pdot+ and of L+^I is p+ + a*pdot+, with a, b, c, d >= 0.  The
half-maps pi_-, pi_o, pi_+ and pibar_o act on these parameters; their
composition is the three-zone return map.

pi_+ is evaluated from its parametric angle form (the event-driven crossing
is kept as a built-in consistency check); pi_o and pibar_o are evaluated by
event-driven closed-form crossings.
"""

from __future__ import annotations

import enum
import functools
import math
from dataclasses import dataclass

from scipy.optimize import brentq

from .errors import (ConvergenceError, DomainError, MissingLandmark,
                     UnsupportedZoneType)
from .flow import (CrossingEvent, Line, TimeSign, ZoneFlow, first_crossing,
                   first_exit, phi_shifted)
from .model import CanonicalParams, ZoneId

PARAM_EVENT_TOL = 1e-9   # parametric-vs-event agreement for pi_+


class Section(enum.Enum):
    L_MINUS_OUT = "c"    # L-^O, parameter c
    L_MINUS_IN = "d"     # L-^I, parameter d
    L_PLUS_OUT = "b"     # L+^O, parameter b
    L_PLUS_IN = "a"      # L+^I, parameter a


@dataclass(frozen=True)
class SectionCoord:
    section: Section
    value: float


@dataclass(frozen=True)
class HalfMapEval:
    """One half-map evaluation with flight data and closed-form derivative."""

    input: SectionCoord
    output: SectionCoord
    flight_time: float
    angle: float
    derivative: float
    derivative_is_limit: bool = False

    @property
    def value(self) -> float:
        return self.output.value


@dataclass(frozen=True)
class Landmarks:
    """Boundary constants organizing the cycle search (case b2 < -1)."""

    a_o_star: float            # pi_o(0)
    b_o_star: float            # pibar_o^{-1}(0)
    a_plus_star: float         # pi_+(0) if t+ > 0, else domain endpoint of pi_+
    b_plus_star: float | None  # pi_+(0) when defined (t+ > 0)
    a_o_plus: float            # pi_+^{-1}(b_o*)
    c_star: float | None       # left endpoint of the three-zone domain, if any

    def require(self, name: str) -> float:
        val = getattr(self, name)
        if val is None:
            raise MissingLandmark(f"landmark {name} undefined in this regime")
        return val


def section_point(params: CanonicalParams, coord: SectionCoord) -> tuple[float, float]:
    b2 = params.b2
    v = coord.value
    if coord.section is Section.L_MINUS_OUT:
        return (-1.0, -v * (b2 - 1.0))
    if coord.section is Section.L_MINUS_IN:
        return (-1.0, v * (b2 - 1.0))
    if coord.section is Section.L_PLUS_OUT:
        return (1.0, -v * (b2 + 1.0))
    return (1.0, v * (b2 + 1.0))


def section_value(params: CanonicalParams, section: Section, y: float) -> float:
    b2 = params.b2
    if section is Section.L_MINUS_OUT:
        return y / (1.0 - b2)
    if section is Section.L_MINUS_IN:
        return y / (b2 - 1.0)
    if section is Section.L_PLUS_OUT:
        return -y / (b2 + 1.0)
    return y / (b2 + 1.0)


class _Engine:
    """Per-parameter caches: zone flows, the pi_+ angle window, landmarks."""

    def __init__(self, params: CanonicalParams):
        self.params = params
        self.zo = ZoneFlow.from_params(params, ZoneId.CENTRAL)
        self.zp = ZoneFlow.from_params(params, ZoneId.PLUS)
        self._zm = None
        self._h_max = None
        self._landmarks = None
        self._bo_star_flight = None

    @property
    def zm(self) -> ZoneFlow:
        if self._zm is None:
            self._zm = ZoneFlow.from_params(self.params, ZoneId.MINUS)
        return self._zm

    # ---- parametric pi_+ in the shifted angle h = tau - pi ----

    @property
    def h_max(self) -> float:
        """Angle width of the pi_+ window: tau ranges over (pi, pi + h_max]."""
        if self._h_max is None:
            zp = self.zp
            if zp.t == 0.0:
                raise UnsupportedZoneType("pi_+ needs t+ != 0 (focus, not center)")
            y = zp.gamma if zp.t > 0.0 else -zp.gamma
            self._h_max = brentq(lambda h: phi_shifted(h, y), 1e-15, math.pi,
                                 xtol=1e-15, rtol=8.9e-16)
        return self._h_max

    def a_of_h(self, h: float) -> float:
        zp = self.zp
        return (zp.beta * math.exp(-zp.gamma * (math.pi + h))
                * phi_shifted(h, zp.gamma) / (zp.d * math.sin(h)))

    def b_of_h(self, h: float) -> float:
        zp = self.zp
        return (zp.beta * math.exp(zp.gamma * (math.pi + h))
                * phi_shifted(h, -zp.gamma) / (zp.d * math.sin(h)))

    def solve_a(self, a: float) -> float:
        """h with a_of_h(h) = a; a_of_h decreases monotonically on (0, h_max]."""
        h_max = self.h_max
        a_min = self.a_of_h(h_max)
        if a < a_min - 1e-12 * max(1.0, a_min):
            raise DomainError(
                f"pi_+: input {a:.6g} below admissible endpoint {a_min:.6g}")
        if a <= a_min:
            return h_max
        try:
            return brentq(lambda h: self.a_of_h(h) - a, 1e-15, h_max,
                          xtol=1e-15, rtol=8.9e-16)
        except ValueError as exc:
            raise ConvergenceError(
                f"pi_+ angle solve failed for a={a:.6g} on (0, {h_max:.6g}]") from exc

    def solve_b(self, b: float) -> float:
        """h with b_of_h(h) = b; b_of_h decreases monotonically on (0, h_max]."""
        h_max = self.h_max
        b_min = self.b_of_h(h_max)
        if b < b_min - 1e-12 * max(1.0, b_min):
            raise DomainError(
                f"pi_+^-1: input {b:.6g} below admissible endpoint {b_min:.6g}")
        if b <= b_min:
            return h_max
        try:
            return brentq(lambda h: self.b_of_h(h) - b, 1e-15, h_max,
                          xtol=1e-15, rtol=8.9e-16)
        except ValueError as exc:
            raise ConvergenceError(
                f"pi_+ inverse angle solve failed for b={b:.6g}") from exc

    # ---- landmark crossings through the contact point of L- ----

    def tangent_forward(self) -> CrossingEvent:
        """Forward crossing of L+ by the orbit through (-1, 0)."""
        return first_crossing(self.zo, (-1.0, 0.0), Line.L_PLUS, TimeSign.FORWARD)

    def tangent_backward(self) -> CrossingEvent:
        """Backward crossing of L+ by the orbit through (-1, 0)."""
        return first_crossing(self.zo, (-1.0, 0.0), Line.L_PLUS, TimeSign.BACKWARD)

    def landmarks(self) -> Landmarks:
        if self._landmarks is not None:
            return self._landmarks
        params = self.params
        if params.b2 >= -1.0:
            raise DomainError("landmarks are defined for b2 < -1")
        ev_f = self.tangent_forward()
        a_o_star = section_value(params, Section.L_PLUS_IN, ev_f.point[1])
        ev_b = self.tangent_backward()
        b_o_star = section_value(params, Section.L_PLUS_OUT, ev_b.point[1])
        self._bo_star_flight = -ev_b.time
        h_max = self.h_max
        if self.zp.t > 0.0:
            b_plus_star = self.b_of_h(h_max)
            a_plus_star = b_plus_star
        else:
            b_plus_star = None
            a_plus_star = self.a_of_h(h_max)
        a_o_plus = self.a_of_h(self.solve_b(b_o_star))
        c_star = None
        if a_o_plus > a_o_star:
            hi = 1.0
            while pi_o(params, hi).value < a_o_plus:
                hi *= 2.0
                if hi > 1e12:
                    raise ConvergenceError("c* bracketing exceeded 1e12")
            c_star = brentq(lambda c: pi_o(params, c).value - a_o_plus,
                            0.0, hi, xtol=1e-13, rtol=8.9e-16)
        self._landmarks = Landmarks(a_o_star=a_o_star, b_o_star=b_o_star,
                                    a_plus_star=a_plus_star,
                                    b_plus_star=b_plus_star,
                                    a_o_plus=a_o_plus, c_star=c_star)
        return self._landmarks


@functools.lru_cache(maxsize=128)
def _engine(params: CanonicalParams) -> _Engine:
    return _Engine(params)


def tau_star(params: CanonicalParams) -> float:
    """Swept angle of the contact orbit bounding the pi_+ window (< 2 pi)."""
    return math.pi + _engine(params).h_max


def pi_minus(params: CanonicalParams, c: float) -> HalfMapEval:
    """Half-map of the left zone, L-^O -> L-^I.

    Identity for t- = 0 (center); for t- > 0 evaluated by the closed-form
    crossing.  The t- < 0 branch is excluded by hypothesis.
    """
    if c < 0.0:
        raise DomainError("pi_-: c must be >= 0")
    eng = _engine(params)
    zm = eng.zm
    if zm.t < 0.0:
        raise UnsupportedZoneType("pi_- requires t- >= 0")
    if zm.eq[0] <= -1.0:
        raise DomainError("pi_- requires a virtual center/focus in the left zone")
    coord = SectionCoord(Section.L_MINUS_OUT, c)
    if c == 0.0:
        return HalfMapEval(input=coord,
                           output=SectionCoord(Section.L_MINUS_IN, 0.0),
                           flight_time=0.0, angle=0.0, derivative=1.0,
                           derivative_is_limit=True)
    ev = first_crossing(zm, section_point(params, coord), Line.L_MINUS,
                        TimeSign.FORWARD)
    d_val = section_value(params, Section.L_MINUS_IN, ev.point[1])
    if zm.t == 0.0:
        return HalfMapEval(input=coord,
                           output=SectionCoord(Section.L_MINUS_IN, c),
                           flight_time=ev.time, angle=ev.angle_swept,
                           derivative=1.0)
    deriv = (c / d_val) * math.exp(2.0 * zm.gamma * ev.angle_swept)
    return HalfMapEval(input=coord,
                       output=SectionCoord(Section.L_MINUS_IN, d_val),
                       flight_time=ev.time, angle=ev.angle_swept,
                       derivative=deriv)


def pi_o(params: CanonicalParams, d: float) -> HalfMapEval:
    """Half-map of the central zone, L-^I -> L+^I (virtual focus case)."""
    if d < 0.0:
        raise DomainError("pi_o: d must be >= 0")
    eng = _engine(params)
    if params.b2 >= -1.0:
        raise DomainError("pi_o requires b2 < -1 (virtual central focus)")
    coord = SectionCoord(Section.L_MINUS_IN, d)
    ev = first_crossing(eng.zo, section_point(params, coord), Line.L_PLUS,
                        TimeSign.FORWARD)
    a_val = section_value(params, Section.L_PLUS_IN, ev.point[1])
    b2 = params.b2
    ratio2 = ((1.0 - b2) / (1.0 + b2)) ** 2
    if d == 0.0:
        deriv, is_limit = 0.0, True
    else:
        deriv, is_limit = (ratio2 * math.exp(2.0 * eng.zo.gamma * ev.angle_swept)
                           * d / a_val), False
    return HalfMapEval(input=coord,
                       output=SectionCoord(Section.L_PLUS_IN, a_val),
                       flight_time=ev.time, angle=ev.angle_swept,
                       derivative=deriv, derivative_is_limit=is_limit)


def pi_bar_o(params: CanonicalParams, b: float) -> HalfMapEval:
    """Half-map of the central zone, L+^O -> L-^O, defined for b >= b_o*."""
    eng = _engine(params)
    lm = eng.landmarks()
    b_o_star = lm.b_o_star
    if b < b_o_star * (1.0 - 1e-12) - 1e-12:
        raise DomainError(
            f"pibar_o: input {b:.6g} below domain endpoint b_o* = {b_o_star:.6g}")
    coord = SectionCoord(Section.L_PLUS_OUT, b)
    b2 = params.b2
    ratio2 = ((b2 + 1.0) / (b2 - 1.0)) ** 2
    if b <= b_o_star * (1.0 + 1e-12):
        # grazing orbit: image is the contact point of L-, by construction
        return HalfMapEval(input=coord,
                           output=SectionCoord(Section.L_MINUS_OUT, 0.0),
                           flight_time=eng._bo_star_flight,
                           angle=eng.zo.beta * eng._bo_star_flight,
                           derivative=math.inf, derivative_is_limit=True)
    ev = first_exit(eng.zo, section_point(params, coord), TimeSign.FORWARD)
    if ev.line is not Line.L_MINUS:
        raise DomainError(
            f"pibar_o: orbit of b={b:.6g} returns to L+ before reaching L-")
    c_val = section_value(params, Section.L_MINUS_OUT, ev.point[1])
    deriv = ratio2 * math.exp(2.0 * eng.zo.gamma * ev.angle_swept) * b / c_val
    return HalfMapEval(input=coord,
                       output=SectionCoord(Section.L_MINUS_OUT, c_val),
                       flight_time=ev.time, angle=ev.angle_swept,
                       derivative=deriv)


def pi_plus(params: CanonicalParams, a: float, cross_check: bool = True) -> HalfMapEval:
    """Half-map of the right zone, L+^I -> L+^O, for a real focus.

    Evaluated from the parametric angle equations; when cross_check is on,
    the event-driven crossing re-computes the value and a mismatch beyond
    1e-9 (relative) raises ConvergenceError.
    """
    eng = _engine(params)
    zp = eng.zp
    if zp.eq[0] <= 1.0:
        raise DomainError("pi_+ requires a real focus in the right zone")
    if zp.t > 0.0 and a < 0.0:
        raise DomainError("pi_+: a must be >= 0 for t+ > 0")
    h = eng.solve_a(a)
    b_val = eng.b_of_h(h)
    tau = math.pi + h
    s = tau / zp.beta
    coord = SectionCoord(Section.L_PLUS_IN, a)
    if cross_check and a > 0.0:
        ev = first_crossing(zp, section_point(params, coord), Line.L_PLUS,
                            TimeSign.FORWARD)
        b_event = section_value(params, Section.L_PLUS_OUT, ev.point[1])
        if abs(b_event - b_val) > PARAM_EVENT_TOL * max(1.0, abs(b_val)):
            raise ConvergenceError(
                f"pi_+ parametric/event mismatch at a={a:.6g}: "
                f"{b_val!r} vs {b_event!r}")
    if a == 0.0 or b_val == 0.0:
        deriv = 0.0 if a == 0.0 else math.inf
        is_limit = True
    else:
        deriv = (a / b_val) * math.exp(2.0 * zp.gamma * tau)
        is_limit = False
    return HalfMapEval(input=coord,
                       output=SectionCoord(Section.L_PLUS_OUT, b_val),
                       flight_time=s, angle=tau, derivative=deriv,
                       derivative_is_limit=is_limit)


def pi_plus_inverse(params: CanonicalParams, b: float) -> HalfMapEval:
    """pi_+^{-1}, by monotone root finding on the parametric forward map."""
    eng = _engine(params)
    zp = eng.zp
    h = eng.solve_b(b)
    a_val = eng.a_of_h(h)
    tau = math.pi + h
    if b == 0.0 or a_val == 0.0:
        deriv, is_limit = (math.inf if b == 0.0 else 0.0), True
    else:
        deriv, is_limit = (b / a_val) * math.exp(-2.0 * zp.gamma * tau), False
    return HalfMapEval(input=SectionCoord(Section.L_PLUS_OUT, b),
                       output=SectionCoord(Section.L_PLUS_IN, a_val),
                       flight_time=tau / zp.beta, angle=tau,
                       derivative=deriv, derivative_is_limit=is_limit)


def rho_o(params: CanonicalParams, b: float) -> HalfMapEval:
    """Central-zone first return L+^O -> L+^I without touching L-.

    Defined for 0 <= b < b_o*; aborts when the orbit's excursion reaches
    L- (that branch belongs to pibar_o).
    """
    if b < 0.0:
        raise DomainError("rho_o: b must be >= 0")
    eng = _engine(params)
    coord = SectionCoord(Section.L_PLUS_OUT, b)
    if b == 0.0:
        return HalfMapEval(input=coord,
                           output=SectionCoord(Section.L_PLUS_IN, 0.0),
                           flight_time=0.0, angle=0.0, derivative=1.0,
                           derivative_is_limit=True)
    ev = first_exit(eng.zo, section_point(params, coord), TimeSign.FORWARD)
    if ev.line is not Line.L_PLUS:
        raise DomainError(
            f"rho_o: orbit of b={b:.6g} reaches L- (minimum x hits -1)")
    a_val = section_value(params, Section.L_PLUS_IN, ev.point[1])
    deriv = (b / a_val) * math.exp(eng.zo.t * ev.time)
    return HalfMapEval(input=coord,
                       output=SectionCoord(Section.L_PLUS_IN, a_val),
                       flight_time=ev.time, angle=ev.angle_swept,
                       derivative=deriv)


def compute_landmarks(params: CanonicalParams) -> Landmarks:
    """All landmark constants for the b2 < -1 configurations."""
    return _engine(params).landmarks()


# ---- ordinate-level maps through the contact point, valid at b2 = -1 too ----

def ordinate_pi_o_0(params: CanonicalParams) -> float:
    """Ordinate on L+ of the forward orbit through (-1, 0)."""
    return _engine(params).tangent_forward().point[1]


def ordinate_pi_bar_o_inv_0(params: CanonicalParams) -> float:
    """Ordinate on L+ of the backward orbit through (-1, 0)."""
    return _engine(params).tangent_backward().point[1]


def ordinate_pi_plus_inv_bar_0(params: CanonicalParams) -> float:
    """Ordinate on L+ of the backward right-zone orbit through the point
    (1, ordinate_pi_bar_o_inv_0)."""
    eng = _engine(params)
    y_bar = ordinate_pi_bar_o_inv_0(params)
    ev = first_crossing(eng.zp, (1.0, y_bar), Line.L_PLUS, TimeSign.BACKWARD)
    return ev.point[1]

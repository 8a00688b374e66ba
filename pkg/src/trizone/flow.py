"""Closed-form linear flows per zone and boundary-crossing solvers.

Each zone with complex eigenvalues alpha +/- i*beta flows as

    p(s) = eq + e^{alpha s} [cos(beta s) I + sin(beta s)/beta (A - alpha I)] (p0 - eq)

Crossing times of the lines x = +/-1 are found by splitting time into the
monotonicity intervals of x(s) (the critical times are equally spaced by
pi/beta) and running a safeguarded bisection/Newton hybrid on the first
interval that brackets the target.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

from .errors import (BracketFailure, ConvergenceError, NoCrossing,
                     NonFocusZone)
from .model import L_MINUS_X, L_PLUS_X, CanonicalParams, ZoneId, zone_spectrum

TANGENT_SPEED = 1e-9     # |dx/ds| below this at a root marks a grazing event
CROSS_XTOL = 1e-12       # |x - (+/-1)| tolerance at accepted crossings
DEFAULT_MAX_ANGLE = 6.0 * math.pi


class Line(enum.Enum):
    L_MINUS = L_MINUS_X
    L_PLUS = L_PLUS_X


class TimeSign(enum.Enum):
    FORWARD = 1.0
    BACKWARD = -1.0


class Direction(enum.Enum):
    INTO_ZONE = "into_zone"
    OUT_OF_ZONE = "out_of_zone"


def phi(x: float, y: float) -> float:
    """1 - e^{xy} (cos x - y sin x); sign brackets for the crossing angles."""
    return 1.0 - math.exp(x * y) * (math.cos(x) - y * math.sin(x))


def phi_shifted(h: float, y: float) -> float:
    """phi(pi + h, y) evaluated without cancellation near h = 0."""
    return 1.0 + math.exp((math.pi + h) * y) * (math.cos(h) - y * math.sin(h))


@dataclass(frozen=True)
class ZoneFlow:
    """Closed-form evaluator for one zone's focus/center flow."""

    zone: ZoneId
    a11: float
    a12: float
    a21: float
    a22: float
    b1: float
    b2: float
    t: float
    d: float
    alpha: float
    beta: float
    gamma: float
    eq: tuple[float, float]

    @classmethod
    def from_params(cls, params: CanonicalParams, zone: ZoneId) -> "ZoneFlow":
        spec = zone_spectrum(params, zone)
        if spec.beta is None:
            raise NonFocusZone(
                f"zone {zone.value}: closed-form flow needs 4d - t^2 > 0")
        (A, B) = params.matrix(zone)
        return cls(zone=zone, a11=float(A[0, 0]), a12=float(A[0, 1]),
                   a21=float(A[1, 0]), a22=float(A[1, 1]),
                   b1=float(B[0]), b2=float(B[1]),
                   t=spec.t, d=spec.d, alpha=spec.alpha, beta=spec.beta,
                   gamma=spec.gamma, eq=spec.equilibrium)

    def at(self, s: float, p: tuple[float, float]) -> tuple[float, float]:
        if s == 0.0:
            return (p[0], p[1])
        dx = p[0] - self.eq[0]
        dy = p[1] - self.eq[1]
        al, be = self.alpha, self.beta
        c = math.cos(be * s)
        sn = math.sin(be * s) / be
        ex = math.exp(al * s)
        x = self.eq[0] + ex * (c * dx + sn * ((self.a11 - al) * dx + self.a12 * dy))
        y = self.eq[1] + ex * (c * dy + sn * (self.a21 * dx + (self.a22 - al) * dy))
        return (x, y)

    def velocity(self, p: tuple[float, float]) -> tuple[float, float]:
        return (self.a11 * p[0] + self.a12 * p[1] + self.b1,
                self.a21 * p[0] + self.a22 * p[1] + self.b2)

    def _x_coeffs(self, p: tuple[float, float], sign: float):
        """x(sign*u) = eq_x + e^{al u} (c1 cos(beta u) + c2 sin(beta u)), u >= 0."""
        dx = p[0] - self.eq[0]
        dy = p[1] - self.eq[1]
        c1 = dx
        c2 = sign * ((self.a11 - self.alpha) * dx + self.a12 * dy) / self.beta
        return sign * self.alpha, c1, c2


@dataclass(frozen=True)
class CrossingEvent:
    """One located boundary crossing of a zone orbit."""

    time: float                  # signed flight time s
    point: tuple[float, float]
    angle_swept: float           # tau = beta * |s|
    direction: Direction
    line: Line
    tangential: bool = False


def zone_flow(flow: ZoneFlow, s: float, p: tuple[float, float]) -> tuple[float, float]:
    """Flow p for time s; global in time, caller restricts to zone validity."""
    return flow.at(s, p)


def _into_zone(zone: ZoneId, line: Line, xdot: float) -> bool:
    if zone is ZoneId.MINUS:
        return xdot < 0.0
    if zone is ZoneId.PLUS:
        return xdot > 0.0
    return xdot > 0.0 if line is Line.L_MINUS else xdot < 0.0


def _solve_monotone(f, fp, lo: float, hi: float, flo: float, fhi: float) -> float:
    """Root of monotone f on [lo, hi]: bisection to width 1e-3, then Newton
    with bisection fallback, to |f| < CROSS_XTOL."""
    while hi - lo > 1e-3:
        mid = 0.5 * (lo + hi)
        fm = f(mid)
        if fm == 0.0:
            return mid
        if (flo < 0.0) == (fm < 0.0):
            lo, flo = mid, fm
        else:
            hi, fhi = mid, fm
    u = 0.5 * (lo + hi)
    fu = f(u)
    for _ in range(60):
        if abs(fu) < CROSS_XTOL:
            return u
        dfu = fp(u)
        step_ok = dfu != 0.0
        if step_ok:
            un = u - fu / dfu
            step_ok = lo <= un <= hi
        if not step_ok:
            un = 0.5 * (lo + hi)
        fn = f(un)
        if (flo < 0.0) == (fn < 0.0):
            lo, flo = un, fn
        else:
            hi, fhi = un, fn
        u, fu = un, fn
        if hi - lo <= 4e-16 * max(1.0, abs(u)):
            return u
    if abs(fu) < 1e-9:
        return u
    raise ConvergenceError(f"crossing refinement stalled on [{lo}, {hi}]")


def _first_exit(flow: ZoneFlow, p: tuple[float, float], sign: float,
                lines: tuple[Line, ...], max_angle: float):
    """Earliest u > 0 with x(sign*u) on one of `lines`.

    Returns (u, line) or None when no crossing occurs within the angle
    window.  Works on monotone pieces of x, so roots are never skipped.
    """
    al, c1, c2 = flow._x_coeffs(p, sign)
    be = flow.beta
    rho = math.hypot(c1, c2)
    if rho == 0.0:
        return None
    psi = math.atan2(c2, c1)
    theta0 = psi + math.atan(al / be)

    targets = [(line, line.value - flow.eq[0]) for line in lines]

    def xrel(u):
        return math.exp(al * u) * (c1 * math.cos(be * u) + c2 * math.sin(be * u))

    def xrel_prime(u):
        cu, su = math.cos(be * u), math.sin(be * u)
        return math.exp(al * u) * ((al * c1 + be * c2) * cu + (al * c2 - be * c1) * su)

    k = math.ceil((0.0 - theta0) / math.pi + 1e-12)
    lo = 0.0
    x_lo = xrel(0.0)
    n_pieces = int(max_angle / math.pi) + 2
    for _ in range(n_pieces):
        hi = (theta0 + k * math.pi) / be
        k += 1
        if hi <= lo + 1e-300:
            continue
        if be * hi > max_angle:
            hi = max_angle / be
        x_hi = xrel(hi)
        best = None
        for line, m in targets:
            flo, fhi = x_lo - m, x_hi - m
            if flo == 0.0 and lo == 0.0:
                continue              # starting on this line; want u > 0
            if flo == 0.0:
                best_u = lo
            elif flo * fhi < 0.0 or fhi == 0.0:
                best_u = _solve_monotone(lambda u, m=m: xrel(u) - m,
                                         xrel_prime, lo, hi, flo, fhi)
            else:
                continue
            if best is None or best_u < best[0]:
                best = (best_u, line)
        if best is not None:
            return best
        if be * hi >= max_angle:
            break
        lo, x_lo = hi, x_hi
    return None


def first_crossing(flow: ZoneFlow, p: tuple[float, float], line: Line,
                   time_sign: TimeSign = TimeSign.FORWARD,
                   max_angle: float = DEFAULT_MAX_ANGLE) -> CrossingEvent:
    """First crossing of `line` by the orbit of p, in the given time sense.

    Raises NoCrossing when the orbit provably never meets the line and
    BracketFailure when the angle window is exhausted without a bracket
    (the window is reported, never extended silently).
    """
    sign = time_sign.value
    hit = _first_exit(flow, p, sign, (line,), max_angle)
    if hit is None:
        if not reaches(flow, p, line, time_sign):
            raise NoCrossing(
                f"orbit of {p} in zone {flow.zone.value} never reaches {line.name}")
        raise BracketFailure(
            f"no sign change within angle window {max_angle:g} "
            f"for {line.name} from {p} in zone {flow.zone.value}")
    u, _ = hit
    s = sign * u
    pt = flow.at(s, p)
    xdot = flow.velocity(pt)[0]
    return CrossingEvent(time=s, point=pt, angle_swept=flow.beta * u,
                         direction=(Direction.INTO_ZONE
                                    if _into_zone(flow.zone, line, xdot)
                                    else Direction.OUT_OF_ZONE),
                         line=line, tangential=abs(xdot) < TANGENT_SPEED)


def first_exit(flow: ZoneFlow, p: tuple[float, float],
               time_sign: TimeSign = TimeSign.FORWARD,
               max_angle: float = DEFAULT_MAX_ANGLE) -> CrossingEvent:
    """First crossing of either boundary line of the flow's zone."""
    if flow.zone is ZoneId.MINUS:
        lines: tuple[Line, ...] = (Line.L_MINUS,)
    elif flow.zone is ZoneId.PLUS:
        lines = (Line.L_PLUS,)
    else:
        lines = (Line.L_MINUS, Line.L_PLUS)
    sign = time_sign.value
    hit = _first_exit(flow, p, sign, lines, max_angle)
    if hit is None:
        if not any(reaches(flow, p, ln, time_sign) for ln in lines):
            raise NoCrossing(
                f"orbit of {p} in zone {flow.zone.value} never exits")
        raise BracketFailure(
            f"no exit within angle window {max_angle:g} from {p} "
            f"in zone {flow.zone.value}")
    u, line = hit
    s = sign * u
    pt = flow.at(s, p)
    xdot = flow.velocity(pt)[0]
    return CrossingEvent(time=s, point=pt, angle_swept=flow.beta * u,
                         direction=(Direction.INTO_ZONE
                                    if _into_zone(flow.zone, line, xdot)
                                    else Direction.OUT_OF_ZONE),
                         line=line, tangential=abs(xdot) < TANGENT_SPEED)


def reaches(flow: ZoneFlow, p: tuple[float, float], line: Line,
            time_sign: TimeSign = TimeSign.FORWARD) -> bool:
    """Whether the orbit of p ever meets `line`, by extremal analysis.

    Uses the envelope of x(s): extrema sit at equally spaced angles with
    magnitudes scaling by e^{alpha pi / beta} per half-turn, so the sup and
    inf over all positive time are determined by the first two extrema.
    """
    sign = time_sign.value
    al, c1, c2 = flow._x_coeffs(p, sign)
    be = flow.beta
    m = line.value - flow.eq[0]
    rho = math.hypot(c1, c2)
    if rho == 0.0:
        return False
    if m == 0.0 or al > 0.0:
        return True
    psi = math.atan2(c2, c1)
    theta0 = psi + math.atan(al / be)
    if al == 0.0:
        return abs(m) <= rho
    # contracting: the two leading extrema bound the whole orbit
    k = math.ceil((0.0 - theta0) / math.pi + 1e-12)
    hi_val = lo_val = c1
    for j in (k, k + 1):
        u = (theta0 + j * math.pi) / be
        v = math.exp(al * u) * (c1 * math.cos(be * u) + c2 * math.sin(be * u))
        hi_val = max(hi_val, v)
        lo_val = min(lo_val, v)
    return lo_val <= m <= hi_val

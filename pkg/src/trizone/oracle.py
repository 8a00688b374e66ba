"""Event-driven Runge-Kutta cross-validation of the closed-form machinery.

Everything here integrates numerically (adaptive embedded 5(4) pair with
events located by the solver's root finder) and never touches the
closed-form flow, so agreement between the two paths is meaningful
evidence.  This is a validation tool, not the primary computation path.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field

import numpy as np
from scipy.integrate import solve_ivp

from .errors import DomainError, NoCrossing, StepUnderflow
from .halfmaps import Section, SectionCoord, section_point, section_value
from .model import CanonicalParams, ZoneId, zone_spectrum

EVENT_XTOL = 1e-10
DEFAULT_RTOL = 1e-10
DEFAULT_ATOL = 1e-12

_ZONE_CODE = {ZoneId.MINUS: -1, ZoneId.CENTRAL: 0, ZoneId.PLUS: 1}


class IntegrationSign(enum.Enum):
    FORWARD = 1.0
    BACKWARD = -1.0


@dataclass(frozen=True)
class OracleEvent:
    time: float
    point: tuple[float, float]
    line_x: float
    tangential: bool


@dataclass(frozen=True)
class OracleTrajectory:
    """Accepted integration samples plus located boundary events."""

    samples: np.ndarray = field(repr=False)   # columns t, x, y, zone code
    events: tuple[OracleEvent, ...]
    t_final: float
    p_final: tuple[float, float]


def _rhs(params: CanonicalParams, zone: ZoneId, sign: float):
    (A, B) = params.matrix(zone)
    a11, a12, a21, a22 = A[0, 0], A[0, 1], A[1, 0], A[1, 1]
    b1, b2 = B[0], B[1]

    def f(t, y):
        return (sign * (a11 * y[0] + a12 * y[1] + b1),
                sign * (a21 * y[0] + a22 * y[1] + b2))

    return f


def _zone_events(zone: ZoneId):
    """Terminal events on the zone's outward boundary crossings."""
    evs = []
    if zone in (ZoneId.MINUS, ZoneId.CENTRAL):
        g = lambda t, y: y[0] + 1.0
        g.terminal = True
        g.direction = 1.0 if zone is ZoneId.MINUS else -1.0
        evs.append((g, -1.0))
    if zone in (ZoneId.PLUS, ZoneId.CENTRAL):
        g = lambda t, y: y[0] - 1.0
        g.terminal = True
        g.direction = -1.0 if zone is ZoneId.PLUS else 1.0
        evs.append((g, 1.0))
    return evs


def _zone_at(params: CanonicalParams, p: tuple[float, float], sign: float) -> ZoneId:
    """Zone of the upcoming leg; on a line the curvature breaks the tie."""
    x, y = p
    if x < -1.0:
        return ZoneId.MINUS
    if x > 1.0:
        return ZoneId.PLUS
    if abs(x - 1.0) > 1e-12 and abs(x + 1.0) > 1e-12:
        return ZoneId.CENTRAL
    line = 1.0 if abs(x - 1.0) <= 1e-12 else -1.0
    xdot = sign * -y            # x' = -y in every zone on the lines
    if xdot > 1e-12:
        return ZoneId.PLUS if line > 0 else ZoneId.CENTRAL
    if xdot < -1e-12:
        return ZoneId.CENTRAL if line > 0 else ZoneId.MINUS
    # grazing: x'' = -y' with y' = x + a1 y + b2 on both sides of the line
    xdd = sign * -(x + params.a1 * y + params.b2)
    if line > 0:
        return ZoneId.PLUS if xdd > 0 else ZoneId.CENTRAL
    return ZoneId.CENTRAL if xdd > 0 else ZoneId.MINUS


def integrate(params: CanonicalParams, p0: tuple[float, float], t_span: float,
              direction: IntegrationSign = IntegrationSign.FORWARD,
              rtol: float = DEFAULT_RTOL, atol: float = DEFAULT_ATOL,
              max_legs: int = 10_000) -> OracleTrajectory:
    """Integrate the piecewise field zone by zone over |t| <= t_span.

    Each leg runs the active zone's linear field until a terminal boundary
    event; integration resumes with the adjacent zone (the field is
    continuous, so no jump handling is needed).
    """
    sign = direction.value
    t = 0.0
    p = (float(p0[0]), float(p0[1]))
    rows = []
    events: list[OracleEvent] = []
    for _ in range(max_legs):
        zone = _zone_at(params, p, sign)
        evs = _zone_events(zone)
        sol = solve_ivp(_rhs(params, zone, sign), (t, t_span), p,
                        method="RK45", rtol=rtol, atol=atol,
                        events=[g for g, _ in evs])
        if sol.status == -1:
            raise StepUnderflow(
                f"integrator stalled at t={sol.t[-1]:.6g}, p={tuple(sol.y[:, -1])}")
        code = _ZONE_CODE[zone]
        rows.append(np.column_stack([sign * sol.t, sol.y[0], sol.y[1],
                                     np.full(sol.t.shape, code, dtype=float)]))
        if sol.status == 1:
            idx = next(i for i, te in enumerate(sol.t_events) if len(te))
            t = float(sol.t_events[idx][0])
            y_ev = sol.y_events[idx][0]
            p = (float(y_ev[0]), float(y_ev[1]))
            line_x = evs[idx][1]
            xdot = -p[1]
            events.append(OracleEvent(time=sign * t,
                                      point=p, line_x=line_x,
                                      tangential=abs(xdot) < 1e-9))
        else:
            t = float(sol.t[-1])
            p = (float(sol.y[0, -1]), float(sol.y[1, -1]))
            break
    samples = np.vstack(rows)
    return OracleTrajectory(samples=samples, events=tuple(events),
                            t_final=sign * t, p_final=p)


_MAP_LEGS = {
    # map name -> (zone, input section, output section, target line,
    #              event direction, forbidden line or None)
    "pi_minus": (ZoneId.MINUS, Section.L_MINUS_OUT, Section.L_MINUS_IN,
                 -1.0, 1.0, None),
    "pi_o": (ZoneId.CENTRAL, Section.L_MINUS_IN, Section.L_PLUS_IN,
             1.0, 1.0, None),
    "pi_plus": (ZoneId.PLUS, Section.L_PLUS_IN, Section.L_PLUS_OUT,
                1.0, -1.0, None),
    "pi_bar_o": (ZoneId.CENTRAL, Section.L_PLUS_OUT, Section.L_MINUS_OUT,
                 -1.0, -1.0, 1.0),
    "rho_o": (ZoneId.CENTRAL, Section.L_PLUS_OUT, Section.L_PLUS_IN,
              1.0, 1.0, -1.0),
}


def oracle_half_map(params: CanonicalParams, name: str, value: float,
                    rtol: float = DEFAULT_RTOL, atol: float = DEFAULT_ATOL):
    """Half-map value computed purely by integration plus event detection.

    Returns (output parameter, flight time).  Raises DomainError when the
    orbit leaves through the line the map must not touch, NoCrossing when
    no event fires inside the generous time window.
    """
    if name not in _MAP_LEGS:
        raise KeyError(f"unknown half-map {name!r}")
    zone, sec_in, sec_out, target, ev_dir, forbidden = _MAP_LEGS[name]
    spec = zone_spectrum(params, zone, require_focus=True)
    p0 = section_point(params, SectionCoord(sec_in, value))
    t_max = 8.0 * math.pi / spec.beta

    g_target = lambda t, y: y[0] - target
    g_target.terminal = True
    g_target.direction = ev_dir
    event_fns = [g_target]
    if forbidden is not None:
        g_bad = lambda t, y: y[0] - forbidden
        g_bad.terminal = True
        g_bad.direction = -ev_dir
        event_fns.append(g_bad)

    sol = solve_ivp(_rhs(params, zone, 1.0), (0.0, t_max), p0,
                    method="RK45", rtol=rtol, atol=atol, events=event_fns)
    if sol.status == -1:
        raise StepUnderflow(f"oracle stalled evaluating {name} at {value:.6g}")
    if forbidden is not None and len(sol.t_events[1]):
        raise DomainError(
            f"oracle {name}: orbit reached x = {forbidden:+g} first")
    if not len(sol.t_events[0]):
        raise NoCrossing(
            f"oracle {name}: no boundary event within t = {t_max:.3g}")
    t_ev = float(sol.t_events[0][0])
    y_ev = sol.y_events[0][0]
    out = section_value(params, sec_out, float(y_ev[1]))
    return out, t_ev


def cycle_closure_defect(params: CanonicalParams, start: tuple[float, float],
                         period: float, rtol: float = DEFAULT_RTOL,
                         atol: float = DEFAULT_ATOL) -> float:
    """Distance between a point and its image after one oracle period."""
    traj = integrate(params, start, period, rtol=rtol, atol=atol)
    return math.hypot(traj.p_final[0] - start[0], traj.p_final[1] - start[1])


def center_invariant(params: CanonicalParams, p: tuple[float, float]) -> float:
    """Quadratic first integral of the left zone when its trace vanishes."""
    spec = zone_spectrum(params, ZoneId.MINUS)
    if spec.t != 0.0:
        raise DomainError("center invariant needs t- = 0")
    (A, _) = params.matrix(ZoneId.MINUS)
    a11, a21 = A[0, 0], A[1, 0]
    dx = p[0] - spec.equilibrium[0]
    dy = p[1] - spec.equilibrium[1]
    return dx * dx - (2.0 * a11 / a21) * dx * dy + (1.0 / a21) * dy * dy

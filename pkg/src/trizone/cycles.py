"""Return maps, limit-cycle search, stability and the area identity.

Fixed points of the three-zone return map (composition of the four
half-maps on L-^O) and of the two-zone return map (pi_+ followed by the
central first-return) are located as displacement-function roots.  Every
cycle is checked against the necessary area identity

    t_- S_- + t_o S_o + t_+ S_+ = 0

with S_i the cycle-interior area inside zone i.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field

import numpy as np
from scipy.optimize import brentq

from . import halfmaps as hm
from .errors import (ConvergenceError, DomainError, NoBracket,
                     UnsupportedRegime)
from .flow import Line, TimeSign, ZoneFlow, first_crossing
from .halfmaps import (Section, SectionCoord, compute_landmarks, pi_bar_o,
                       pi_minus, pi_o, pi_plus, rho_o, section_point)
from .model import CanonicalParams, ZoneId, check_hypotheses, zone_spectrum

CYCLE_POINTS = 10_000       # polyline budget per cycle
CLOSURE_TOL = 1e-10
MULTIPLIER_XCHECK = 1e-5    # chain-rule vs finite-difference agreement
GREEN_REL_TOL = 1e-6


class ReturnMapKind(enum.Enum):
    THREE_ZONE = "three_zone"
    TWO_ZONE_PLUS = "two_zone_plus"


class CycleKind(enum.Enum):
    TWO_ZONE = "two_zone"
    THREE_ZONE = "three_zone"


class Stability(enum.Enum):
    ATTRACTING = "attracting"
    REPELLING = "repelling"
    NEUTRAL = "neutral"


@dataclass(frozen=True)
class ReturnMap:
    """A callable half-map composition with resolved domain endpoint."""

    kind: ReturnMapKind
    params: CanonicalParams
    domain_lo: float
    domain_hi: float | None          # bounded only for the two-zone map
    composition: tuple[str, ...]

    def __call__(self, c: float) -> float:
        return self.evaluate(c, fast=True)[0]

    def evaluate(self, c: float, fast: bool = False):
        """Map value and the list of half-map evaluations along the way.

        With fast=True the identity left map is skipped and the pi_+
        parametric/event cross-check is off (used by dense scans).
        """
        p = self.params
        evals = []
        if self.kind is ReturnMapKind.THREE_ZONE:
            if "pi_minus" in self.composition:
                ev = pi_minus(p, c)
                evals.append(ev)
                c = ev.value
            ev_o = pi_o(p, c)
            ev_p = pi_plus(p, ev_o.value, cross_check=not fast)
            ev_b = pi_bar_o(p, ev_p.value)
            evals += [ev_o, ev_p, ev_b]
            return ev_b.value, evals
        ev_p = pi_plus(p, c, cross_check=not fast)
        ev_r = rho_o(p, ev_p.value)
        evals += [ev_p, ev_r]
        return ev_r.value, evals


@dataclass(frozen=True)
class LimitCycle:
    """A located isolated periodic orbit."""

    kind: CycleKind
    fixed_point: SectionCoord
    crossings: tuple[tuple[float, float], ...]
    period: float
    multiplier: float
    stability: Stability
    green_residual: float
    areas: tuple[float, float, float]       # (S_-, S_o, S_+)
    traces: tuple[float, float, float]      # (t_-, t_o, t_+)
    polyline: np.ndarray = field(repr=False)
    times: np.ndarray = field(repr=False, default=None)
    zone_codes: np.ndarray = field(repr=False, default=None)
    flight_times: tuple[float, ...] = ()
    unproven_regime: bool = False


@dataclass(frozen=True)
class AnnulusReport:
    """Evidence for the period annulus at b2 = -1."""

    is_center_config: bool
    inner_boundary: tuple[float, float]
    outer_ordinate: float                   # L+ crossing of the tangent orbit
    displacement_sup: float
    outer_polyline: np.ndarray = field(repr=False)


@dataclass(frozen=True)
class CycleSearchResult:
    """Everything find_cycles learned about one parameter point."""

    cycles: tuple[LimitCycle, ...]
    annulus: AnnulusReport | None = None
    unproven_regime: bool = False
    regime: str = ""
    mirrored: bool = False
    exhaustive: bool = False   # sign-change scan only; never a completeness claim


def _gammas(params: CanonicalParams) -> tuple[float, float]:
    go = zone_spectrum(params, ZoneId.CENTRAL, require_focus=True).gamma
    gp = zone_spectrum(params, ZoneId.PLUS, require_focus=True).gamma
    return go, gp


def _regime_label(gp: float, landmark_gap: float) -> tuple[str, bool]:
    """Phase-portrait case from sign(gamma_+) and sign(a_o* - a_o^+).

    The two proven configurations pair gamma_+ < 0 with a positive gap and
    gamma_+ > 0 with a negative gap; the other two are open cases.
    """
    if gp < 0.0:
        return ("broken-annulus (a)", True) if landmark_gap > 0.0 else \
               ("broken-annulus (b), open case", False)
    return ("broken-annulus (b)", True) if landmark_gap < 0.0 else \
           ("broken-annulus (a), open case", False)


def return_map(params: CanonicalParams, kind: ReturnMapKind) -> ReturnMap:
    """Resolve a return-map composition and its domain endpoint."""
    hyp = check_hypotheses(params)
    if params.b2 >= -1.0:
        raise UnsupportedRegime("return maps need b2 < -1 (mirror b2 > 1 first)")
    lm = compute_landmarks(params)
    t_minus = zone_spectrum(params, ZoneId.MINUS).t
    if kind is ReturnMapKind.THREE_ZONE:
        comp = ("pi_o", "pi_plus", "pi_bar_o") if t_minus == 0.0 else \
               ("pi_minus", "pi_o", "pi_plus", "pi_bar_o")
        lo = 0.0 if lm.a_o_plus <= lm.a_o_star else lm.require("c_star")
        return ReturnMap(kind=kind, params=params, domain_lo=lo,
                         domain_hi=None, composition=comp)
    t_plus = zone_spectrum(params, ZoneId.PLUS).t
    lo = lm.a_plus_star if t_plus < 0.0 else 0.0
    hi = lm.a_o_plus
    if hi <= lo:
        raise UnsupportedRegime(
            f"two-zone map needs a_o_plus > {'a_plus_star' if t_plus < 0 else '0'} "
            f"(got a_o_plus={hi:.6g}, left={lo:.6g})")
    return ReturnMap(kind=kind, params=params, domain_lo=lo, domain_hi=hi,
                     composition=("pi_plus", "rho_o"))


def displacement(rmap: ReturnMap, c: float) -> float:
    """Fixed-point residual of the return map at c."""
    if c < rmap.domain_lo or (rmap.domain_hi is not None and c > rmap.domain_hi):
        raise DomainError(f"c={c:.6g} outside return-map domain")
    return rmap(c) - c


def _scan_roots(fn, lo: float, hi: float, n: int, log_spaced: bool):
    """All sign-change roots of fn on (lo, hi), with the sample table."""
    if log_spaced:
        span = hi - lo
        grid = np.concatenate(([lo + 1e-9 * span],
                               lo + np.geomspace(1e-6 * span, span, n)))
    else:
        grid = np.linspace(lo, hi, n + 2)[1:-1]
    table = []
    roots = []
    prev_c = None
    prev_v = None
    for c in grid:
        v = fn(c)
        table.append((float(c), float(v)))
        if prev_v is not None and (prev_v < 0.0) != (v < 0.0):
            roots.append(brentq(fn, prev_c, c, xtol=1e-13, rtol=8.9e-16))
        prev_c, prev_v = float(c), float(v)
    return roots, table


def _cosine_grid(s_total: float, n: int) -> np.ndarray:
    """Times in [0, s_total] clustered at both endpoints."""
    i = np.arange(n)
    return s_total * 0.5 * (1.0 - np.cos(math.pi * i / (n - 1)))


def _arc(zf: ZoneFlow, p0: tuple[float, float], s_total: float, n: int) -> np.ndarray:
    pts = np.empty((n, 2))
    for j, s in enumerate(_cosine_grid(s_total, n)):
        pts[j] = zf.at(s, p0)
    return pts


def _shoelace(poly: np.ndarray) -> float:
    x, y = poly[:, 0], poly[:, 1]
    return 0.5 * float(np.sum(x * np.roll(y, -1) - np.roll(x, -1) * y))


def _clip_halfplane(poly: np.ndarray, sign: float, bound: float) -> np.ndarray:
    """Sutherland-Hodgman clip of a closed polygon to sign*x <= sign*bound."""
    out = []
    n = len(poly)
    for i in range(n):
        cur, nxt = poly[i], poly[(i + 1) % n]
        cur_in = sign * cur[0] <= sign * bound
        nxt_in = sign * nxt[0] <= sign * bound
        if cur_in:
            out.append(cur)
        if cur_in != nxt_in:
            t = (bound - cur[0]) / (nxt[0] - cur[0])
            out.append(cur + t * (nxt - cur))
    return np.array(out) if out else np.empty((0, 2))


def zone_areas(polyline: np.ndarray) -> tuple[float, float, float]:
    """Cycle-interior area inside each zone, by polygon clipping."""
    s_minus = abs(_shoelace(_clip_halfplane(polyline, 1.0, -1.0)))
    s_plus = abs(_shoelace(_clip_halfplane(polyline, -1.0, 1.0)))
    mid = _clip_halfplane(polyline, 1.0, 1.0)
    s_mid = abs(_shoelace(_clip_halfplane(mid, -1.0, -1.0))) if len(mid) else 0.0
    return (s_minus, s_mid, s_plus)


def green_check(cycle: LimitCycle) -> float:
    """Residual t_- S_- + t_o S_o + t_+ S_+ from the stored polyline."""
    s_m, s_o, s_p = zone_areas(cycle.polyline)
    t_m, t_o, t_p = cycle.traces
    return t_m * s_m + t_o * s_o + t_p * s_p


def _green_budget(areas, traces) -> float:
    return sum(abs(t) * s for t, s in zip(traces, areas)) + 1e-30


def _stability(mult: float) -> Stability:
    if mult < 1.0 - 1e-12:
        return Stability.ATTRACTING
    if mult > 1.0 + 1e-12:
        return Stability.REPELLING
    return Stability.NEUTRAL


def _multiplier(params, evals, fd_fn, c_star: float) -> float:
    """Chain-rule multiplier, cross-checked against a finite difference."""
    traces = {ZoneId.MINUS: zone_spectrum(params, ZoneId.MINUS).t,
              ZoneId.CENTRAL: zone_spectrum(params, ZoneId.CENTRAL).t,
              ZoneId.PLUS: zone_spectrum(params, ZoneId.PLUS).t}
    zone_of = {Section.L_MINUS_OUT: ZoneId.MINUS,
               Section.L_MINUS_IN: ZoneId.CENTRAL,
               Section.L_PLUS_IN: ZoneId.PLUS,
               Section.L_PLUS_OUT: ZoneId.CENTRAL}
    chain = 1.0
    for ev in evals:
        chain *= ev.derivative
    log_m = sum(traces[zone_of[ev.input.section]] * abs(ev.flight_time)
                for ev in evals)
    divergence = math.exp(log_m)
    if not math.isclose(chain, divergence, rel_tol=1e-8):
        raise ConvergenceError(
            f"multiplier mismatch: chain {chain!r} vs divergence {divergence!r}")
    h = 1e-6 * max(1.0, abs(c_star))
    fd = (fd_fn(c_star + h) - fd_fn(c_star - h)) / (2.0 * h)
    if abs(fd - chain) > MULTIPLIER_XCHECK * max(1.0, abs(chain)):
        raise ConvergenceError(
            f"multiplier cross-check failed: chain {chain!r} vs fd {fd!r}")
    return chain


def _assemble(params: CanonicalParams, rmap: ReturnMap, root: float,
              unproven: bool) -> LimitCycle:
    value, evals = rmap.evaluate(root, fast=False)
    if abs(value - root) > CLOSURE_TOL * max(1.0, abs(root)):
        raise ConvergenceError(
            f"cycle at {root!r} fails closure: residual {value - root:.3e}")
    if (rmap.kind is ReturnMapKind.THREE_ZONE
            and evals[0].input.section is not Section.L_MINUS_OUT):
        # identity left map: absent from the composition, but the cycle
        # still spends time in the left zone
        evals = [pi_minus(params, root)] + evals
    flows = {ZoneId.MINUS: None, ZoneId.CENTRAL: ZoneFlow.from_params(params, ZoneId.CENTRAL),
             ZoneId.PLUS: ZoneFlow.from_params(params, ZoneId.PLUS)}
    zone_of = {Section.L_MINUS_OUT: ZoneId.MINUS,
               Section.L_MINUS_IN: ZoneId.CENTRAL,
               Section.L_PLUS_IN: ZoneId.PLUS,
               Section.L_PLUS_OUT: ZoneId.CENTRAL}
    segments = []      # (zone flow, start point, flight time)
    crossings = []
    for ev in evals:
        if ev.flight_time == 0.0:
            continue
        zid = zone_of[ev.input.section]
        if flows[zid] is None:
            flows[zid] = ZoneFlow.from_params(params, zid)
        p0 = section_point(params, ev.input)
        segments.append((flows[zid], p0, ev.flight_time))
        crossings.append(p0)
    total_angle = sum(zf.beta * abs(s) for zf, _, s in segments)
    pieces = []
    time_pieces = []
    code_pieces = []
    t_offset = 0.0
    zone_code = {ZoneId.MINUS: -1.0, ZoneId.CENTRAL: 0.0, ZoneId.PLUS: 1.0}
    for zf, p0, s in segments:
        n = max(64, int(CYCLE_POINTS * (zf.beta * abs(s)) / total_angle))
        pieces.append(_arc(zf, p0, s, n))
        time_pieces.append(t_offset + _cosine_grid(s, n))
        code_pieces.append(np.full(n, zone_code[zf.zone]))
        t_offset += abs(s)
    polyline = np.vstack(pieces)
    times = np.concatenate(time_pieces)
    codes = np.concatenate(code_pieces)
    areas = zone_areas(polyline)
    traces = (zone_spectrum(params, ZoneId.MINUS).t,
              zone_spectrum(params, ZoneId.CENTRAL).t,
              zone_spectrum(params, ZoneId.PLUS).t)
    period = sum(abs(s) for _, _, s in segments)
    mult = _multiplier(params, evals, rmap, root)
    residual = sum(t * s for t, s in zip(traces, areas))
    kind = (CycleKind.THREE_ZONE if rmap.kind is ReturnMapKind.THREE_ZONE
            else CycleKind.TWO_ZONE)
    section = (Section.L_MINUS_OUT if kind is CycleKind.THREE_ZONE
               else Section.L_PLUS_IN)
    return LimitCycle(kind=kind,
                      fixed_point=SectionCoord(section, root),
                      crossings=tuple(map(tuple, crossings)),
                      period=period, multiplier=mult,
                      stability=_stability(mult),
                      green_residual=residual, areas=areas, traces=traces,
                      polyline=polyline, times=times, zone_codes=codes,
                      flight_times=tuple(ev.flight_time for ev in evals),
                      unproven_regime=unproven)


def detect_annulus(params: CanonicalParams, n_samples: int = 50) -> AnnulusReport:
    """Period-annulus evidence at b2 = -1.

    Works in raw ordinates on L+ (the section parameterization degenerates
    on this boundary).  Samples orbits between the equilibrium (1, 0) and
    the orbit tangent to L- at (-1, 0) and measures their first-return
    displacement.
    """
    if params.b2 != -1.0:
        raise DomainError("detect_annulus requires b2 = -1")
    go, gp = _gammas(params)
    is_center = abs(go + gp) <= 1e-12 * max(1.0, abs(go), abs(gp))
    zo = ZoneFlow.from_params(params, ZoneId.CENTRAL)
    zp = ZoneFlow.from_params(params, ZoneId.PLUS)
    ev_out = first_crossing(zo, (-1.0, 0.0), Line.L_PLUS, TimeSign.FORWARD)
    y_out = ev_out.point[1]

    def half_loops(y: float):
        ev1 = first_crossing(zp, (1.0, y), Line.L_PLUS, TimeSign.FORWARD)
        ev2 = first_crossing(zo, (1.0, ev1.point[1]), Line.L_PLUS, TimeSign.FORWARD)
        return ev1, ev2

    sup = 0.0
    for i in range(1, n_samples + 1):
        y = y_out * i / (n_samples + 1)
        _, ev2 = half_loops(y)
        sup = max(sup, abs(ev2.point[1] - y))
    ev1, ev2 = half_loops(y_out)
    outer = np.vstack([_arc(zo, (-1.0, 0.0), ev_out.time, 800),
                       _arc(zp, (1.0, y_out), ev1.time, 800),
                       _arc(zo, (1.0, ev1.point[1]), ev2.time, 800)])
    return AnnulusReport(is_center_config=is_center,
                         inner_boundary=(1.0, 0.0),
                         outer_ordinate=y_out,
                         displacement_sup=sup,
                         outer_polyline=outer)


def find_cycles(params: CanonicalParams, n_scan: int = 2048,
                c_max: float = 1e4, n_scan_two: int = 256) -> CycleSearchResult:
    """Locate limit cycles for b2 < -1 (or the rotated b2 > 1 case).

    Sign-change scanning over a documented grid; reports every root found
    but never claims exhaustiveness.  In the two proven configurations a
    missing bracket for a guaranteed cycle raises NoBracket with the
    sampled displacement table.
    """
    if params.b2 > 1.0:
        inner = find_cycles(params.mirrored(), n_scan=n_scan, c_max=c_max,
                            n_scan_two=n_scan_two)
        cycles = tuple(_rotate_cycle(c) for c in inner.cycles)
        return CycleSearchResult(cycles=cycles, annulus=inner.annulus,
                                 unproven_regime=inner.unproven_regime,
                                 regime=inner.regime + " (rotated from b2 > 1)",
                                 mirrored=True)
    if params.b2 == -1.0:
        report = detect_annulus(params)
        if not report.is_center_config:
            raise UnsupportedRegime(
                "b2 = -1 without the center condition is outside this "
                "search (single-cycle case of the prior literature)")
        return CycleSearchResult(cycles=(), annulus=report,
                                 regime="period annulus (center)")
    if params.b2 > -1.0:
        raise UnsupportedRegime("find_cycles covers b2 < -1 and b2 > 1 only")

    hyp = check_hypotheses(params)
    if not (hyp.h1 and hyp.h2):
        raise UnsupportedRegime(
            f"hypotheses fail: h1={hyp.h1} h2={hyp.h2} (need a central "
            "focus plus an outer center and an opposite-stability focus)")
    go, gp = _gammas(params)
    lm = compute_landmarks(params)
    regime, proven = _regime_label(gp, lm.a_o_star - lm.a_o_plus)
    unproven = not proven
    cycles: list[LimitCycle] = []

    # two-zone cycle: displacement of rho_o . pi_+ on the bounded interval
    try:
        rm2 = return_map(params, ReturnMapKind.TWO_ZONE_PLUS)
    except UnsupportedRegime:
        rm2 = None
    if rm2 is not None:
        lo, hi = rm2.domain_lo, rm2.domain_hi
        pad = 1e-7 * (hi - lo)
        fn2 = lambda a: rm2(a) - a
        roots2, table2 = _scan_roots(fn2, lo + pad, hi - pad, n_scan_two,
                                     log_spaced=False)
        if not roots2 and proven:
            raise NoBracket(
                "proven regime but no two-zone displacement sign change "
                f"in ({lo + pad:.6g}, {hi - pad:.6g})", table2)
        for r in roots2:
            cycles.append(_assemble(params, rm2, r, unproven))

    # three-zone cycle: displacement of the full return map
    rm3 = return_map(params, ReturnMapKind.THREE_ZONE)
    lo3 = rm3.domain_lo
    fn3 = lambda c: rm3(c) - c
    roots3, table3 = _scan_roots(fn3, lo3, lo3 + c_max, n_scan, log_spaced=True)
    if not roots3 and proven:
        raise NoBracket(
            f"proven regime but no three-zone displacement sign change in "
            f"({lo3:.6g}, {lo3 + c_max:.6g})", table3)
    seen = [r for r in roots3]
    deduped = []
    for r in sorted(seen):
        if not deduped or abs(r - deduped[-1]) > 1e-8 * max(1.0, abs(r)):
            deduped.append(r)
    for r in deduped:
        cycles.append(_assemble(params, rm3, r, unproven))

    return CycleSearchResult(cycles=tuple(cycles), annulus=None,
                             unproven_regime=unproven, regime=regime)


def _rotate_cycle(cycle: LimitCycle) -> LimitCycle:
    """Map a cycle of the mirrored system back through (x,y) -> (-x,-y)."""
    return LimitCycle(kind=cycle.kind, fixed_point=cycle.fixed_point,
                      crossings=tuple((-x, -y) for x, y in cycle.crossings),
                      period=cycle.period, multiplier=cycle.multiplier,
                      stability=cycle.stability,
                      green_residual=cycle.green_residual,
                      areas=(cycle.areas[2], cycle.areas[1], cycle.areas[0]),
                      traces=(cycle.traces[2], cycle.traces[1], cycle.traces[0]),
                      polyline=-cycle.polyline,
                      times=cycle.times,
                      zone_codes=(-cycle.zone_codes
                                  if cycle.zone_codes is not None else None),
                      flight_times=cycle.flight_times,
                      unproven_regime=cycle.unproven_regime)

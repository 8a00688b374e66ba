import math

import numpy as np
import pytest
from scipy.integrate import solve_ivp

from trizone import (Line, NoCrossing, TimeSign, ZoneFlow, ZoneId,
                     first_crossing, first_exit, phi, reaches, zone_flow)


def rk_reference(params, zone, p0, s):
    """Independent check value: integrate the single zone's linear field."""
    (A, B) = params.matrix(zone)
    f = lambda t, y: A @ y + B
    sol = solve_ivp(f, (0.0, s), p0, rtol=1e-12, atol=1e-14, method="RK45")
    return sol.y[:, -1]


class TestPhi:
    def test_zero_at_origin_any_slope(self, rng):
        for y in rng.uniform(-5.0, 5.0, size=20):
            assert phi(0.0, y) == 0.0

    def test_at_pi(self, rng):
        for g in rng.uniform(-3.0, 3.0, size=20):
            assert phi(math.pi, g) == pytest.approx(1.0 + math.exp(math.pi * g),
                                                    rel=1e-15)

    def test_zero_slope_zeros(self):
        # phi(x, 0) = 1 - cos x: nonnegative, vanishing exactly at the even
        # multiples of pi (dense scan; on (-pi, 2 pi] that set is {0, 2 pi})
        xs = np.linspace(-4.0 * math.pi, 2.0 * math.pi, 20001)
        vals = np.array([phi(x, 0.0) for x in xs])
        ks = np.round(xs / (2.0 * math.pi))
        near_zero = np.abs(xs - 2.0 * math.pi * ks) < 1e-3
        assert vals[~near_zero].min() > 0.0
        assert vals.min() >= 0.0
        assert phi(0.0, 0.0) == 0.0
        assert abs(phi(2.0 * math.pi, 0.0)) < 1e-15
        on_window = (xs > -math.pi) & near_zero
        assert set(np.unique(ks[on_window])) == {0.0, 1.0}

    @pytest.mark.parametrize("y", [0.3, 1.2, 2.0])
    def test_sign_pattern_positive_slope(self, y):
        # one interior sign change on (-2pi, 2pi), located in (pi, 2pi)
        xs = np.linspace(-2.0 * math.pi + 1e-6, 2.0 * math.pi - 1e-6, 10000)
        vals = np.array([phi(x, y) for x in xs])
        flips = np.flatnonzero(np.sign(vals[:-1]) * np.sign(vals[1:]) < 0)
        assert len(flips) == 1
        x_hat = xs[flips[0]]
        assert math.pi < x_hat < 2.0 * math.pi
        assert vals[xs < 0].min() > 0.0

    @pytest.mark.parametrize("y", [-0.3, -1.2, -2.0])
    def test_sign_pattern_negative_slope(self, y):
        xs = np.linspace(-2.0 * math.pi + 1e-6, 2.0 * math.pi - 1e-6, 10000)
        vals = np.array([phi(x, y) for x in xs])
        flips = np.flatnonzero(np.sign(vals[:-1]) * np.sign(vals[1:]) < 0)
        assert len(flips) == 1
        x_hat = xs[flips[0]]
        assert -2.0 * math.pi < x_hat < -math.pi
        assert vals[xs > 0].min() > 0.0


class TestZoneFlow:
    def test_identity_at_zero_time(self, ex51, rng):
        for zone in ZoneId:
            zf = ZoneFlow.from_params(ex51, zone)
            for _ in range(10):
                p = tuple(rng.uniform(-3.0, 3.0, size=2))
                assert zone_flow(zf, 0.0, p) == p

    def test_semigroup(self, ex51, rng):
        zf = ZoneFlow.from_params(ex51, ZoneId.CENTRAL)
        for _ in range(25):
            p = tuple(rng.uniform(-2.0, 2.0, size=2))
            s, u = rng.uniform(-50.0, 50.0, size=2)
            direct = zone_flow(zf, s + u, p)
            stepped = zone_flow(zf, s, zone_flow(zf, u, p))
            scale = max(1.0, abs(direct[0]), abs(direct[1]))
            assert abs(direct[0] - stepped[0]) <= 1e-10 * scale
            assert abs(direct[1] - stepped[1]) <= 1e-10 * scale

    def test_equilibrium_is_fixed(self, ex51, rng):
        for zone in ZoneId:
            zf = ZoneFlow.from_params(ex51, zone)
            for s in rng.uniform(-20.0, 20.0, size=5):
                moved = zone_flow(zf, s, zf.eq)
                assert moved == pytest.approx(zf.eq, abs=1e-9)

    def test_against_rk_reference(self, ex51):
        zf = ZoneFlow.from_params(ex51, ZoneId.PLUS)
        got = zone_flow(zf, 0.7, (1.0, 0.3))
        want = rk_reference(ex51, ZoneId.PLUS, (1.0, 0.3), 0.7)
        assert got == pytest.approx(tuple(want), abs=1e-8)

    def test_central_contact_crossing_matches_printed_angle(self, ex51_center):
        # at b2 = -1 the forward contact orbit crosses x = 1 after the angle
        # arccos(alpha_o) with ordinate -2 e^{gamma_o tau}
        zo = ZoneFlow.from_params(ex51_center, ZoneId.CENTRAL)
        ev = first_crossing(zo, (-1.0, 0.0), Line.L_PLUS)
        tau = math.acos(zo.alpha)
        assert ev.angle_swept == pytest.approx(tau, abs=1e-12)
        assert ev.point[1] == pytest.approx(-2.0 * math.exp(zo.gamma * tau),
                                            abs=1e-12)


class TestFirstCrossing:
    def test_crossing_lands_on_line(self, ex51, rng):
        zo = ZoneFlow.from_params(ex51, ZoneId.CENTRAL)
        for _ in range(50):
            y0 = -rng.uniform(0.1, 30.0)
            ev = first_crossing(zo, (-1.0, y0), Line.L_PLUS)
            assert abs(ev.point[0] - 1.0) < 1e-12
            assert ev.time > 0.0

    def test_center_symmetric_return(self, ex51, rng):
        # left zone is a center: returns to the mirror ordinate
        zm = ZoneFlow.from_params(ex51, ZoneId.MINUS)
        for _ in range(20):
            y0 = rng.uniform(0.05, 10.0)
            ev = first_crossing(zm, (-1.0, y0), Line.L_MINUS)
            assert ev.point[1] == pytest.approx(-y0, rel=1e-10, abs=1e-12)

    def test_forward_crossing_matches_rk_event(self, ex51):
        zo = ZoneFlow.from_params(ex51, ZoneId.CENTRAL)
        ev = first_crossing(zo, (-1.0, 0.0), Line.L_PLUS)
        (A, B) = ex51.matrix(ZoneId.CENTRAL)
        hit = lambda t, y: y[0] - 1.0
        hit.terminal = True
        hit.direction = 1.0
        sol = solve_ivp(lambda t, y: A @ y + B, (0.0, 20.0), (-1.0, 0.0),
                        rtol=1e-12, atol=1e-14, events=hit)
        assert ev.time == pytest.approx(float(sol.t_events[0][0]), abs=1e-8)
        assert ev.point[1] == pytest.approx(float(sol.y_events[0][0][1]),
                                            abs=1e-8)

    def test_backward_reverses_forward(self, ex51):
        zo = ZoneFlow.from_params(ex51, ZoneId.CENTRAL)
        ev = first_crossing(zo, (-1.0, -2.0), Line.L_PLUS)
        back = first_crossing(zo, ev.point, Line.L_MINUS, TimeSign.BACKWARD)
        assert back.time == pytest.approx(-ev.time, rel=1e-12)
        assert back.point == pytest.approx((-1.0, -2.0), abs=1e-10)

    def test_tangential_flag_for_grazing_return(self, ex51):
        # a return crossing arbitrarily close to the contact point has
        # vanishing transversal speed and must be flagged
        zm = ZoneFlow.from_params(ex51, ZoneId.MINUS)
        y0 = 1e-10 * (1.0 - ex51.b2)
        ev = first_crossing(zm, (-1.0, y0), Line.L_MINUS)
        assert ev.tangential

    def test_no_crossing_into_attracting_focus(self, ex51):
        # right zone has a real attracting focus; a start near it never
        # returns to the switching line
        zp = ZoneFlow.from_params(ex51, ZoneId.PLUS)
        near = (zp.eq[0] + 1e-3, zp.eq[1])
        with pytest.raises(NoCrossing):
            first_crossing(zp, near, Line.L_PLUS)

    def test_first_exit_identifies_line(self, ex51):
        zo = ZoneFlow.from_params(ex51, ZoneId.CENTRAL)
        # small entry from L+^O turns back to L+; deep entry reaches L-
        ev_small = first_exit(zo, (1.0, 0.05))
        assert ev_small.line is Line.L_PLUS
        ev_deep = first_exit(zo, (1.0, 5.0))
        assert ev_deep.line is Line.L_MINUS


class TestReaches:
    def test_near_real_focus_false(self, ex51):
        zp = ZoneFlow.from_params(ex51, ZoneId.PLUS)
        assert not reaches(zp, (zp.eq[0] + 1e-3, zp.eq[1]), Line.L_PLUS)

    def test_entry_into_virtual_focus_zone_true(self, ex51):
        zo = ZoneFlow.from_params(ex51, ZoneId.CENTRAL)
        assert reaches(zo, (-1.0, -0.5), Line.L_PLUS)
        assert reaches(zo, (1.0, 0.5), Line.L_PLUS)   # returns to L+

    def test_matches_oracle_eventing(self, ex51, rng):
        """reaches agrees with whether an RK event fires (right zone,
        attracting focus: the domain boundary sits at a finite ordinate)."""
        zp = ZoneFlow.from_params(ex51, ZoneId.PLUS)
        (A, B) = ex51.matrix(ZoneId.PLUS)
        hit = lambda t, y: y[0] - 1.0
        hit.terminal = True
        hit.direction = -1.0
        for _ in range(20):
            y0 = -rng.uniform(0.01, 3.0)
            p0 = (1.0 + 1e-12, y0)
            sol = solve_ivp(lambda t, y: A @ y + B, (0.0, 200.0), p0,
                            rtol=1e-10, atol=1e-12, events=hit)
            fired = bool(len(sol.t_events[0]))
            assert reaches(zp, p0, Line.L_PLUS) == fired

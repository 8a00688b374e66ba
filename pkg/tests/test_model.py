import numpy as np
import pytest

from trizone import (CanonicalParams, ContactData, DegenerateZone, Locality,
                     NonFocusZone, Table1Case, ZoneId, build_system,
                     check_hypotheses, classify_equilibria, continuity_defect,
                     zone_spectrum)


def params(a11=0.0, a1=0.0, b2=0.0, d2=0.0, c11=0.0, f2=0.0):
    return CanonicalParams(a11=a11, a1=a1, b2=b2, d2=d2, c11=c11, f2=f2)


class TestBuildSystem:
    def test_printed_matrix_forms(self):
        # the a1 = 1, b2 = -0.9 variant of the first worked family
        p = params(a11=-1.0, a1=1.0, b2=-0.9, d2=4.0, c11=-1.4, f2=-1.35)
        (A_m, B_m), (A_o, B_o), (A_p, B_p) = build_system(p)
        assert np.array_equal(A_o, [[0.0, -1.0], [1.0, 1.0]])
        assert np.array_equal(B_o, [0.0, -0.9])
        assert np.array_equal(A_m, [[-1.0, -1.0], [1.0 + 0.9 + 4.0, 1.0]])
        assert np.array_equal(B_m, [-1.0, 4.0])
        assert np.array_equal(A_p, [[-1.4, -1.0], [1.0 - 0.9 + 1.35, 1.0]])
        assert np.array_equal(B_p, [1.4, -1.35])

    def test_zero_params(self):
        (A_m, B_m), (A_o, B_o), _ = build_system(params())
        assert np.array_equal(A_o, [[0.0, -1.0], [1.0, 0.0]])
        assert np.array_equal(B_o, [0.0, 0.0])
        assert continuity_defect(params()) == 0.0

    def test_continuity_random_params(self, rng):
        # direct evaluation on both lines: the construction is exact, the
        # tolerance only absorbs rounding
        for _ in range(50):
            vals = rng.uniform(-3.0, 3.0, size=6)
            p = CanonicalParams(*vals)
            assert continuity_defect(p, n=100, y_max=1e3, rng=rng) <= 1e-12

    def test_central_determinant_is_one(self, rng):
        for _ in range(20):
            p = CanonicalParams(*rng.uniform(-2.0, 2.0, size=6))
            _, (A_o, _), _ = build_system(p)
            assert A_o[0, 0] * A_o[1, 1] - A_o[0, 1] * A_o[1, 0] == 1.0


class TestContactData:
    def test_contact_points_and_velocities(self, ex51):
        c = ContactData.from_params(ex51)
        assert c.p_minus == (-1.0, 0.0)
        assert c.p_plus == (1.0, 0.0)
        assert c.pdot_minus == (0.0, ex51.b2 - 1.0)
        assert c.pdot_plus == (0.0, ex51.b2 + 1.0)
        # x-component of the field vanishes at both contact points
        assert ex51.field(-1.0, 0.0)[0] == 0.0
        assert ex51.field(1.0, 0.0)[0] == 0.0


class TestClassify:
    def base(self, b2):
        # all three zones keep complex eigenvalues over b2 in [-3, 2.5]
        return params(a11=-0.5, a1=0.5, b2=b2, d2=5.0, c11=-1.0, f2=-5.0)

    def test_b2_below_minus_one(self):
        spectra, rep = classify_equilibria(self.base(-2.0))
        loc = {s.zone: s.locality for s in spectra}
        assert loc[ZoneId.MINUS] is Locality.VIRTUAL
        assert loc[ZoneId.CENTRAL] is Locality.VIRTUAL
        assert loc[ZoneId.PLUS] is Locality.REAL
        assert rep.table1_case is Table1Case.B2_LESS_MINUS1

    def test_b2_equal_minus_one_shares_boundary_point(self):
        spectra, rep = classify_equilibria(self.base(-1.0))
        by_zone = {s.zone: s for s in spectra}
        assert by_zone[ZoneId.CENTRAL].equilibrium == (1.0, 0.0)
        assert by_zone[ZoneId.PLUS].equilibrium == (1.0, 0.0)
        assert by_zone[ZoneId.CENTRAL].locality is Locality.ON_BOUNDARY
        assert by_zone[ZoneId.PLUS].locality is Locality.ON_BOUNDARY
        assert by_zone[ZoneId.MINUS].locality is Locality.VIRTUAL
        assert rep.table1_case is Table1Case.B2_EQ_MINUS1

    def test_b2_zero_central_real(self):
        spectra, _ = classify_equilibria(self.base(0.0))
        loc = {s.zone: s.locality for s in spectra}
        assert loc[ZoneId.CENTRAL] is Locality.REAL
        assert loc[ZoneId.MINUS] is Locality.VIRTUAL
        assert loc[ZoneId.PLUS] is Locality.VIRTUAL

    @pytest.mark.parametrize("b2,case", [
        (-3.0, Table1Case.B2_LESS_MINUS1),
        (-1.0, Table1Case.B2_EQ_MINUS1),
        (0.4, Table1Case.ABS_B2_LESS_1),
        (1.0, Table1Case.B2_EQ_1),
        (2.5, Table1Case.B2_GREATER_1),
    ])
    def test_table_rows_pure_function_of_b2(self, b2, case):
        """Locality tags depend only on the sign comparisons of b2 vs +/-1."""
        spectra, rep = classify_equilibria(self.base(b2))
        assert rep.table1_case is case
        expect = {
            Table1Case.B2_LESS_MINUS1: (Locality.VIRTUAL, Locality.VIRTUAL,
                                        Locality.REAL),
            Table1Case.B2_EQ_MINUS1: (Locality.VIRTUAL, Locality.ON_BOUNDARY,
                                      Locality.ON_BOUNDARY),
            Table1Case.ABS_B2_LESS_1: (Locality.VIRTUAL, Locality.REAL,
                                       Locality.VIRTUAL),
            Table1Case.B2_EQ_1: (Locality.ON_BOUNDARY, Locality.ON_BOUNDARY,
                                 Locality.VIRTUAL),
            Table1Case.B2_GREATER_1: (Locality.REAL, Locality.VIRTUAL,
                                      Locality.VIRTUAL),
        }[case]
        got = tuple(s.locality for s in spectra)
        assert got == expect

    def test_degenerate_zone_raises(self):
        # det A_+ = c11*a1 + 1 + b2 - f2 = 0
        p = params(a11=0.0, a1=0.0, b2=0.0, d2=1.0, c11=1.0, f2=1.0)
        with pytest.raises(DegenerateZone):
            classify_equilibria(p)

    def test_real_eigenvalues_raise(self):
        p = params(a1=3.0, d2=3.0)   # central zone: 4 - 9 < 0
        with pytest.raises(NonFocusZone):
            classify_equilibria(p)


class TestHypotheses:
    def test_example_families_satisfy_both(self, ex51, ex52):
        for p in (ex51, ex52):
            rep = check_hypotheses(p)
            assert rep.h1 and rep.h2
            assert rep.center_zone is ZoneId.MINUS

    def test_real_central_eigenvalues_fail_h1(self):
        rep = check_hypotheses(params(a1=3.0, d2=3.0))
        assert not rep.h1

    def test_forced_left_center(self):
        # a11 = -a1 with 1 - a1^2 - b2 + d2 > 0 puts a center in the left zone
        p = params(a11=-1.0, a1=1.0, b2=-1.09, d2=4.0, c11=-1.4, f2=-1.77)
        assert zone_spectrum(p, ZoneId.MINUS).t == 0.0
        assert check_hypotheses(p).center_zone is ZoneId.MINUS

    def test_h2_center_implies_zero_trace(self, rng):
        """Necessary condition from the area identity: a center among the
        outer zones forces its trace to vanish (exactly, by construction)."""
        for _ in range(25):
            p = CanonicalParams(*rng.uniform(-1.5, 1.5, size=6))
            try:
                rep = check_hypotheses(p)
            except Exception:
                continue
            if rep.h2:
                t_center = zone_spectrum(p, rep.center_zone).t
                assert t_center == 0.0

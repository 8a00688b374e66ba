"""Analysis of continuous piecewise-linear planar vector fields with three
zones: normal form, Poincare half-maps, limit-cycle search, perturbation
expansions and an independent integration oracle."""

from .cycles import (AnnulusReport, CycleKind, CycleSearchResult, LimitCycle,
                     ReturnMap, ReturnMapKind, Stability, detect_annulus,
                     displacement, find_cycles, green_check, return_map,
                     zone_areas)
from .errors import (BracketFailure, ConfigError, ConvergenceError,
                     DegenerateZone, DomainError, InconclusiveSign,
                     InvalidFamily, MissingLandmark, NoBracket, NoCrossing,
                     NonFocusZone, StepUnderflow, TrizoneError,
                     UnsupportedRegime, UnsupportedZoneType)
from .flow import (CrossingEvent, Direction, Line, TimeSign, ZoneFlow,
                   first_crossing, first_exit, phi, reaches, zone_flow)
from .halfmaps import (HalfMapEval, Landmarks, Section, SectionCoord,
                       compute_landmarks, ordinate_pi_bar_o_inv_0,
                       ordinate_pi_o_0, ordinate_pi_plus_inv_bar_0, pi_bar_o,
                       pi_minus, pi_o, pi_plus, pi_plus_inverse, rho_o,
                       section_point, section_value, tau_star)
from .model import (CanonicalParams, ContactData, HypothesisReport, Locality,
                    Table1Case, ZoneId, ZoneSpectrum, build_system,
                    check_hypotheses, classify_equilibria, continuity_defect,
                    table1_case, zone_spectrum)
from .oracle import (IntegrationSign, OracleTrajectory, center_invariant,
                     cycle_closure_defect, integrate, oracle_half_map)
from .perturb import (ExpansionCoeffs, ExpansionTarget, FamilySpec, SignClass,
                      Starred, build_family, classify_sign,
                      displacement_expansion, expand_pi_bar_o_inv_0,
                      expand_pi_o_0, expand_pi_plus_inv_bar,
                      starred_quantities)

__version__ = "0.1.0"

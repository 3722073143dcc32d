"""Exact multivariate growth series of regular languages and what they imply:
directional growth rates by independent routes, Perron eigendata and the
maximal-entropy chain, large-deviations rate functions, critical-point
asymptotics, and the classical free-group walk-spectrum formulas."""

from .automaton import (AdjacencyMatrix, Automaton, AutomatonError, adjacency,
                        build_sft_automaton, catalog_automaton, dump_automaton,
                        find_e_witness, free_group_pairing, is_ergodic,
                        load_automaton)
from .polyalg import (MultiPoly, PolyMatrix, RationalSeries, SizeBoundError,
                      det_poly_matrix, elementary_symmetric, eval_poly,
                      eval_poly_gradient, minor, poly_arith)
from .series import (CGReport, CoefficientTable, EXACT, LOG_DOMAIN, check_cg,
                     coefficients_dp, growth_series, series_coefficients,
                     transfer_matrix)
from .indicatrice import (Direction, ExtendedValue, NEG_INF, amoeba_slice,
                          as_direction, direction_grid_2d, direction_grid_3d,
                          maximize_psi_2d, psi_boundary, psi_closed_form,
                          psi_empirical, psi_tmap)
from .spectral import (LdpEstimate, SpectralData, TReport, parry, perron,
                       rate_function, sanov_rate, simulate_ldp, t_map,
                       verify_t_identities)
from .asymptotics import (CriticalPoint, FitReport, critical_points,
                          f2_critical_closed, fit_correction, hessian_scalar_f2)
from .catalog import (FmIdentityReport, GroupParams, chi_akemann, chi_kesten,
                      chi_of_alpha, deg8_check, delta_free_group,
                      free_group_denominator, psi_f3, verify_fm_identities)
from .registry import Language, MethodUnavailable, get_language, language_from_file

__version__ = "0.1.0"

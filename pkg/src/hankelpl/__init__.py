"""High-precision Hankel determinants, Painleve I/III transcendents and
equilibrium measures for the singularly perturbed Laguerre weight
c_j exp(-n(z - log z + t/z)) on deformed complex contours."""

from .weight import WeightParams, Contour, MomentTable, moment, moment_oracle, moment_table
from .orthopoly import (HankelData, RecurrenceTable, hankel_logdet,
                        recurrence_table, y_boundary, identity_suite, mgf)
from .equilibrium import (critical_constants, solve_endpoints, solve_signed,
                          density, phi_maps, g_and_l, sign_region_check)
from .painleve3 import p3_solve, p3_verify, u_transform_check, first_integral_check, lax_check
from .painleve1 import (tritronquee_series, p1_solve, extract_suite,
                        pi_consistency_check, finite_n_inputs)

__version__ = "0.1.0"

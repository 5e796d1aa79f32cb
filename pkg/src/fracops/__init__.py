"""Riemann-Liouville fractional integrals on uniform grids: operator norms,
closed-form bounds and the logarithmic generator of the semigroup."""
from .bounds import (NormBoundReport, best_lower_bound, compile_report, eta, eval_eta_theta,
                     refined_upper_bounds, theta, threshold_exponents)
from .fracint import (FracOrder, alpha_continuity_defect, alpha_zero_profile, apply_frac_integral,
                      build_weights, divergence_profile, semigroup_defect)
from .generator import (difference_quotient_defect, generator_apply, generator_power_closed_form,
                        digamma_power_identity, log_kernel_convolve, unboundedness_ratio)
from .grid import (Family, Interval, LebesgueExponent, SampledFunction, UniformGrid, lp_norm,
                   make_uniform_grid, read_table_csv, sample_family, write_table_csv)
from .norm_est import (NonConvergenceError, NormEstimate, brute_force_norm, build_operator_matrix,
                       estimate_norm, matrix_p_norm, richardson, singular_spectrum)
from .serialize import emit_report
from .special import digamma_fn, gamma_fn

__version__ = "0.1.0"

"""hdunif: uniformity tests on high-dimensional unit spheres.

Samplers for rotationally symmetric alternatives, the Rayleigh statistic in
fixed-p and high-dimensional standardized forms, exact FvML likelihood ratios
and their quadratic local expansions, closed-form asymptotic power curves, a
deterministic Monte Carlo engine for rejection-frequency grids, and a
sphericity-testing application on spatial signs.
"""

from .distributions import (BetaMatched, CustomMonotone, FvML, RotSymModel,
                            SkewNormal, Spiked, Uniform, inverse_cdf_u,
                            sample_rot_sym, sample_skew_normal,
                            sample_spiked_gaussian, sample_uniform_sphere,
                            solve_beta_shapes)
from .errors import (AllMissingColumn, DataError, DegenerateData,
                     DegenerateMoments, DimensionMismatch, DomainError,
                     HdunifError, IncompleteGrid, InfeasibleMoments,
                     MalformedCSV, QuadratureFailure, UsageError, ZeroVector)
from .ingest import IngestReport, ingest_csv
from .moments import (MomentSet, condition_diagnostics, local_alternative_map,
                      moments_empirical, moments_quadrature, rayleigh_mean_var)
from .montecarlo import (Cell, CellResult, ExperimentSpec, FrequencyRecord,
                         GridOutcome, cell_concentration, figure1_spec,
                         figure2_spec, figure3_spec, run_cell, run_grid)
from .power import (PowerCurve, power_curve, power_fixedp_rayleigh,
                    power_highdim_rayleigh, power_specified, tau_from_kappa)
from .quadrature import log_norm_const_general, norm_const_general
from .special import (BoundPair, F_p_cdf, amos_bounds, chisq_cdf,
                      chisq_quantile, log_H, log_bessel_i, log_c_fvml,
                      log_c_p, log_gamma, noncentral_chisq_cdf,
                      std_normal_cdf, std_normal_quantile)
from .sphere import (TangentNormal, apply_rotation, normalize_to_sphere,
                     random_rotation, spherical_sample,
                     tangent_normal_decompose, unit_vector)
from .stats import (TestOutcome, fvml_loglik_invariant, fvml_loglik_specified,
                    john_sphericity_test, lan_residual_invariant,
                    lan_residual_specified, rayleigh_signs_test,
                    rayleigh_statistic, rayleigh_standardized,
                    rayleigh_test_fixedp, rayleigh_test_highdim,
                    sign_sphericity_test, specified_theta_test)

__version__ = "0.1.0"

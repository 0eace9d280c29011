"""Multidimensional Mellin analysis on log-uniform lattices.

Mellin translations and their generators, Sobolev and Besov-Mellin norms,
K-functional estimates, Bernstein and Paley-Wiener projections, Jackson
approximation, and Littlewood-Paley frames for the Laplace-Mellin operator.
"""
from .approx import (JacksonKernel, approx_space_norm, axis_best_approx, best_approx,
                     direct_inverse_report, jackson_apply, jackson_kernel, jackson_symbol,
                     sigma_ladder)
from .bernstein import (BandSpec, FejerKernel, TypeEstimate, band_mask, bernstein_check, favard,
                        favard_partial_sum, kolmogorov_stein_check, ksm_constant,
                        mollifier_project, pw_project, riesz_boas, riesz_boas_symbol,
                        type_estimate)
from .fields import (band_limited_random, lattice_frequency, log_gaussian, plane_wave,
                     power_law_field, random_field, reference_family, two_frequency)
from .frames import (BandFrame, ConvergenceError, DyadicPartition, FrameCoefficients,
                     besov_from_bands, besov_from_coeffs, build_band_frame, build_frames,
                     build_partition, frame_analyze, frame_reconstruct, lp_analyze,
                     lp_synthesize, read_coefficients, write_coefficients)
from .grid import LogGrid, LogLatticeField, inner_product, make_log_grid, parse_exponent, xp_norm
from .io import (FieldFileError, import_csv, read_any, read_field, read_spectrum, write_field,
                 write_spectrum)
from .report import Check, SmoothnessReport
from .smoothness import (BESOV_FORMS, ScaleLadder, SmoothnessParams, besov_norm, default_ladder,
                         hardy_steklov, hardy_steklov_symbol, k_exact2, k_upper, ladder_integral,
                         mixed_modulus, modulus, modulus_L, sobolev_norm, tau_grid)
from .spectral import (MellinSpectrum, Multiplier, apply_multiplier, apply_symbol,
                       energy_density, evolve, inverse_mellin, laplace_mellin_apply,
                       mellin_transform, theta_apply, translate)
from .suites import SUITES, SuiteConfig, run_suite

__version__ = "0.1.0"

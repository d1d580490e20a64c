"""Domination number of one-dimensional proximity catch digraphs.

Construction and exact domination of the digraphs, exact and numerical
P(gamma = 2) for one interval, large-n limits, the multi-interval pmf,
and a seeded Monte Carlo harness with a command line front end.
"""
from .core import (CatchDigraph, DominationOutcome, Intervalization, PcdParams,
                   ProximityRegion, brute_force_domination, build_digraph,
                   domination_number, domination_number_r1, gamma1_region, gamma_of,
                   intervalize, proximity_region)
from .dists import (ArcsineModel, BetaModel, ConditionalModel, DistributionModel,
                    LinearBModel, AbsSineCModel, PiecewisePolynomialPdf, SineDModel,
                    UniformModel, load_model, named_example_model, uniform_model)
from .exact_uniform import (p_exact, p_exact_2_half, p_exact_full, p_exact_r2_c,
                            p_exact_r_half, regime_of)
from .general_f import mean_variance_gamma, p_numeric_general
from .asymptotic import (AsymptoticResult, asymptotic_cccd, asymptotic_general_left,
                         asymptotic_general_right, asymptotic_uniform, rate_constants)
from .multi import (GammaPmf, MultiLimitLaw, asymptotic_multi, expected_gamma,
                    pmf_general_multi, pmf_uniform_multi, theta, theta_count)
from .mc import McConfig, VerificationReport, mc_estimate_p, mc_gamma_pmf, verify_grid
from .errors import *  # noqa: F401,F403

__version__ = "0.1.0"

"""subdens: series densities of stable, tempered stable and inverse-Gaussian
subordinators, their products, quotients and powers, with built-in Monte
Carlo and transform-inversion oracles."""

from .backend import current_backend, set_backend, use_backend
from .composite import (product_inv_limit0, product_inv_mellin,
                        product_inv_pdf, product_inv_pdf_grid,
                        product_stable_limit0, product_stable_mellin,
                        product_stable_pdf, product_stable_pdf_grid,
                        quotient_inv_pdf, quotient_inv_pdf_grid,
                        quotient_limit0, quotient_mellin)
from .errors import (DomainError, EfficiencyError, NonConvergenceError,
                     PoleError, QuadratureError, StripError, SubdensError)
from .invgauss import (ig_cdf, ig_first_exit_cdf, ig_first_exit_pdf,
                       ig_first_exit_pdf_grid, ig_first_exit_reflection_pdf,
                       ig_mellin_t, ig_pdf, ig_pdf_grid, ig_pdf_series_grid)
from .oracle import (CompareResult, ContourSpec, InversionResult, SampleBatch,
                     empirical_compare, laplace_invert, mellin_invert,
                     mellin_numeric, sample_ig, sample_ig_first_exit,
                     sample_inverse, sample_inverse_tempered,
                     sample_product_inv, sample_product_stable,
                     sample_quotient_inv, sample_stable, sample_tempered,
                     sanitized_pdf)
from .params import (DensityValue, GridSpec, IGParams, LimitStructure,
                     MittagLefflerParams, PairParams, StableParams,
                     TemperedParams)
from .specfun import digamma, gamma, mittag_leffler, reciprocal_gamma
from .stable import (inv_stable_half_pdf, inv_stable_limit0, inv_stable_mellin,
                     inv_stable_pdf, inv_stable_pdf_grid, inv_stable_power_limit0,
                     inv_stable_power_pdf, inv_stable_power_pdf_grid,
                     stable_half_pdf, stable_mellin, stable_pdf, stable_pdf_grid,
                     stable_power_pdf, stable_power_pdf_grid)
from .tempered import (inv_tempered_limit0, inv_tempered_pdf,
                       inv_tempered_pdf_grid, tempered_moments, tempered_pdf,
                       tempered_pdf_grid, tempered_tail, tempered_tail_leading)

__version__ = "0.1.0"

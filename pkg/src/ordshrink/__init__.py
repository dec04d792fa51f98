"""Adaptive shrinkage estimators for the means of an ordinal one-way layout.

The estimators work in a penalty basis built from difference operators or
local polynomial annihilators and pick every tuning choice (shrinkage vector,
soft threshold, split fraction, penalty matrix) by minimizing estimated risk.
"""

from .adapt import FitConfig, FitResult, RiskReport, compare, fit
from .basis import (PenaltyBasis, build_basis, coefficients, economy_profile, reconstruct,
                    symmetric_eigen)
from .layout import (DegenerateLayoutError, Layout, LsBaseline, MalformedInputError, ingest_csv,
                     ls_baseline, parse_csv, read_csv)
from .penalty import (PenaltyMatrix, annihilation_residual, difference_matrix, local_annihilator,
                      make_penalty)
from .shrinkage import (RiskEstimate, ShrinkagePlan, VarianceEstimate, apply_plan, hs_adapt,
                        isotonic_decreasing_fit, ms_adapt, ms_risk_estimate, pls_shrinkage,
                        st_adapt, st_risk_estimate, variance_high_component)

__version__ = '0.1.0'

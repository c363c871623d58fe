"""Margin-preserving feature selection for linear SVMs.

Select a small number of feature columns — deterministically via
barrier-potential spectral sparsification, randomly via leverage-score
sampling, or through a Gaussian-sketch front end — so that the SVM margin,
the enclosing-ball radius, and their ratio provably survive the selection,
with every bound checkable from measured quantities.
"""

from .errors import DataError, NumericalError
from .linalg import ThinSvd, orthonormality_defect, row_norms_sq, spectral_norm, thin_svd
from .operators import SamplingOperator
from .bss import (BarrierState, BssDiagnostics, bss_select, candidate_scores,
                  lower_potential, upper_potential)
from .leverage import LeverageDistribution, leverage_scores, leverage_select
from .sketch import SketchConfig, approx_bss_select, gaussian_sketch
from .svm import (SvmModel, error_rate, margin, predict, solve_dual,
                  support_vectors)
from .geometry import (EnclosingBall, RadiusCheck, augmented_right_basis,
                       meb_radius, radius_bound_check)
from .data import (FoldPlan, LabeledDataset, apply_fold, drop_zero_columns,
                   gen_synthetic, load_dataset, make_folds, parse_csv,
                   parse_svmlight, write_svmlight)
from .pipelines import (BoundReport, CvCell, SelectionReport, cv_experiment,
                        feature_frequencies, rfe_select, rrqr_select,
                        summarize_cv, supervised_select, uniform_select,
                        unsupervised_select, verify_margin_bound)

__version__ = "0.1.0"

__all__ = [
    "DataError", "NumericalError",
    "ThinSvd", "thin_svd", "spectral_norm", "row_norms_sq", "orthonormality_defect",
    "SamplingOperator",
    "BarrierState", "BssDiagnostics", "bss_select", "candidate_scores",
    "lower_potential", "upper_potential",
    "LeverageDistribution", "leverage_scores", "leverage_select",
    "SketchConfig", "gaussian_sketch", "approx_bss_select",
    "SvmModel", "solve_dual", "margin", "support_vectors", "predict", "error_rate",
    "EnclosingBall", "RadiusCheck", "meb_radius", "radius_bound_check",
    "augmented_right_basis",
    "LabeledDataset", "FoldPlan", "parse_svmlight", "write_svmlight", "parse_csv",
    "load_dataset", "gen_synthetic", "make_folds", "apply_fold", "drop_zero_columns",
    "SelectionReport", "BoundReport", "CvCell", "supervised_select",
    "unsupervised_select", "verify_margin_bound", "uniform_select", "rrqr_select",
    "rfe_select", "cv_experiment", "summarize_cv", "feature_frequencies",
]

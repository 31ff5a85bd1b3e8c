"""Binary and ordered logit models fitted by differential evolution."""

from .likelihood import (
    binary_loglik,
    cutpoints_from_free,
    free_from_cutpoints,
    logistic_cdf,
    ordered_loglik,
    ordered_probabilities,
)
from .metrics import auc, chi2_sf, lr_test, percent_correct
from .specs import CATALOG, Family, ModelSpec, catalog_spec, custom_spec
from .fit import FitResult, fit, fit_design

__all__ = [
    "CATALOG", "Family", "FitResult", "ModelSpec", "auc", "binary_loglik", "catalog_spec",
    "chi2_sf", "custom_spec", "cutpoints_from_free", "fit", "fit_design", "free_from_cutpoints",
    "logistic_cdf", "lr_test", "ordered_loglik", "ordered_probabilities", "percent_correct",
]

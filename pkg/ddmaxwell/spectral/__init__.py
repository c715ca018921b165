from ddmaxwell.spectral.cutoff import CutoffOperator, apply_cutoff
from ddmaxwell.spectral.fields import ScalarField, VectorField3
from ddmaxwell.spectral.grid import Grid
from ddmaxwell.spectral.norms import gradient_l2, hessian_l2, integrate, lp_norm, sobolev_norm, vector_linf
from ddmaxwell.spectral.operators import curl3, divergence2, gradient3, laplacian, solve_gauss_electric
from ddmaxwell.spectral.sampling import band_limited_field, divergence_free_field

__all__ = [
    "CutoffOperator",
    "Grid",
    "ScalarField",
    "VectorField3",
    "apply_cutoff",
    "band_limited_field",
    "curl3",
    "divergence2",
    "divergence_free_field",
    "gradient3",
    "gradient_l2",
    "hessian_l2",
    "integrate",
    "laplacian",
    "lp_norm",
    "sobolev_norm",
    "solve_gauss_electric",
    "vector_linf",
]

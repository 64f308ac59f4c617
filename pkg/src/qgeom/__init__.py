"""Projections, incidences and Fourier analysis over finite vector spaces F_q^n."""

from .errors import QGeomError
from .gf import FieldElement, FieldSpec, field_make, field_of_order
from .incidence import (
    PlaneFamily,
    construct_few_incidence,
    construct_kakeya_2d,
    construct_many_incidence,
    incidence_bound_check,
    incidence_count,
    moments,
    projection_via_incidence,
    refute_claimed_bound,
)
from .projections import (
    check_main_theorem,
    check_mattila_branch,
    check_uniform_lower_bound,
    exceptional_set,
    project,
)
from .spectral import FunctionTable, fourier, p_norm, salem_check
from .vecspace import (
    AffinePlane,
    PointSet,
    Subspace,
    enumerate_affine,
    enumerate_grassmannian,
    gaussian_binomial,
    span,
)

__all__ = [
    "AffinePlane", "FieldElement", "FieldSpec", "FunctionTable", "PlaneFamily", "PointSet", "QGeomError",
    "Subspace", "check_main_theorem", "check_mattila_branch", "check_uniform_lower_bound",
    "construct_few_incidence", "construct_kakeya_2d", "construct_many_incidence", "enumerate_affine",
    "enumerate_grassmannian", "exceptional_set", "field_make", "field_of_order", "fourier",
    "gaussian_binomial", "incidence_bound_check", "incidence_count", "moments", "p_norm", "project",
    "projection_via_incidence", "refute_claimed_bound", "salem_check", "span",
]

__version__ = "0.1.0"

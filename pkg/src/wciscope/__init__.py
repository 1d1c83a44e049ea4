"""Invariants of weighted projective spaces and weighted complete intersections."""

from .aut import (
    AutPStructure,
    PolynomialMap,
    aut_structure,
    central_torus_element,
    compose,
    make_unipotent_element,
    reductive_element,
)
from .errors import InfeasibleError, NotWellFormedError, StructuralError, WCIError
from .poly import (
    Polynomial,
    count_monomials,
    enumerate_monomials,
    evaluate,
    partial_derivative,
    substitute,
    weighted_degree,
)
from .qs import (
    ExplicitWCI,
    QsVerdict,
    cone_dimension_probe,
    is_singular_cone_point,
    jacobian,
    search_singular_points,
)
from .wci import (
    ClassificationReport,
    WCIDescriptor,
    classify,
    generic_wellformedness,
    hilbert_series_X,
    index,
    is_linear_cone,
    restriction_surjectivity_report,
)
from .wps import (
    SingularStratum,
    WeightedProjectiveSpace,
    graded_dim,
    hilbert_series_P,
    is_well_formed,
    picard_generator,
    singular_strata,
)

__version__ = "0.1.0"
